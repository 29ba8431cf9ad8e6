//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::cubical::{build_local_system, realize, WindowRect};
use crate::detector::{detect_holes, multiscale, DetectorConfig};
use crate::error::{Error, Result};
use crate::homology::betti_numbers;
use crate::image_io::{
    load_grayscale, threshold_sublevel, write_heatmap, BinaryImage, HeatmapFormat, PixelSet,
};
use crate::persistence::{
    merging_profile, persistence, short_filtration, sublevel_filtration,
};
use crate::sheaf::{global_section_dim, global_section_dim_n, NSystem};
use crate::IntHeatmap;

#[derive(Debug, Parser)]
#[command(
    name = "holemap",
    version,
    about = "Locate 1-dimensional holes in binary images with short-filtration persistence",
    after_help = "Input images are PGM (P1/P2/P5) or plain-text integer grids. Pixels with \
value <= --threshold (default 0) are black.\n\nWindows that do not fit inside the image are \
skipped, so a border band narrower than the window may receive no heat."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Image file
    #[arg(long, short)]
    pub input: PathBuf,
    /// Pixels with value <= threshold are black
    #[arg(long, default_value_t = 0)]
    pub threshold: i64,
}

impl InputArgs {
    fn load(&self) -> Result<BinaryImage> {
        Ok(threshold_sublevel(&load_grayscale(&self.input)?, self.threshold))
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Heatmap output path
    #[arg(long)]
    pub out: PathBuf,
    /// csv or pgm
    #[arg(long, default_value = "csv")]
    pub format: HeatmapFormat,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print "b0 b1" of the black pixel set
    Betti {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Print a persistence diagram, one "q birth death" line per bar
    Diagram {
        #[command(flatten)]
        input: InputArgs,
        /// Sub-level filtration of the grayscale values instead of a short filtration
        #[arg(long)]
        sublevel: bool,
        /// Window "row,col,size" for the short filtration
        #[arg(long, value_parser = parse_window)]
        window: Option<WindowRect>,
    },
    /// Print "m o i dim_gamma" for one window
    Local {
        #[command(flatten)]
        input: InputArgs,
        /// Window "row,col,size"
        #[arg(long, value_parser = parse_window)]
        window: WindowRect,
        /// Homology dimension
        #[arg(long, default_value_t = 0)]
        q: usize,
    },
    /// Hole-location heatmap
    Detect {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        window_size: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Hole-size heatmap summed over window sizes
    Size {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated window sizes
        #[arg(long, value_delimiter = ',', required = true)]
        scales: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        step: usize,
        #[command(flatten)]
        output: OutputArgs,
        /// Zero every entry below this value
        #[arg(long)]
        threshold_heat: Option<i64>,
    },
    /// Print "q dim_gamma phi_rank" for an n-system of rectangles
    Sections {
        #[command(flatten)]
        input: InputArgs,
        /// Parts as "row,col,rows,cols;row,col,rows,cols;..."; each part is
        /// the black pixels inside its rectangle
        #[arg(long)]
        parts: String,
        /// Comma-separated homology dimensions
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        q: Vec<usize>,
    },
}

fn parse_numbers(s: &str, want: usize) -> std::result::Result<Vec<i64>, String> {
    let nums = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| format!("bad number {t:?} in {s:?}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if nums.len() != want {
        return Err(format!("expected {want} comma-separated numbers, got {s:?}"));
    }
    Ok(nums)
}

fn parse_window(s: &str) -> std::result::Result<WindowRect, String> {
    let v = parse_numbers(s, 3)?;
    if v[2] < 0 {
        return Err("window size must be positive".into());
    }
    WindowRect::square(v[0], v[1], v[2] as usize).map_err(|e| e.to_string())
}

fn parse_parts(spec: &str, img: &BinaryImage) -> Result<Vec<PixelSet>> {
    spec.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|rect| {
            let v = parse_numbers(rect, 4).map_err(Error::Usage)?;
            if v.iter().any(|&x| x < 0) {
                return Err(Error::Usage(format!("negative value in part {rect:?}")));
            }
            let (r, c, h, w) = (v[0] as usize, v[1] as usize, v[2] as usize, v[3] as usize);
            Ok(img
                .black()
                .iter()
                .filter(|p| p.row >= r && p.row < r + h && p.col >= c && p.col < c + w)
                .copied()
                .collect())
        })
        .collect()
}

/// Parses `args` (including the program name) and runs the command, writing
/// scalar results to `out`.
pub fn run<I, T>(args: I, out: &mut impl Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return out
                .write_all(e.render().to_string().as_bytes())
                .map_err(|e| Error::io("<stdout>", e));
        }
        Err(e) => {
            let first = e.to_string();
            let line = first.lines().next().unwrap_or("invalid arguments");
            return Err(Error::Usage(line.trim_start_matches("error: ").to_string()));
        }
    };
    execute(cli.command, out)
}

pub fn execute(cmd: Command, out: &mut impl Write) -> Result<()> {
    let text = match cmd {
        Command::Betti { input } => {
            let img = input.load()?;
            let b = betti_numbers(&realize(img.black()));
            format!("{} {}\n", b[0], b[1])
        }
        Command::Diagram {
            input,
            sublevel,
            window,
        } => {
            if sublevel {
                let g = load_grayscale(&input.input)?;
                persistence(&sublevel_filtration(&g)).to_text()
            } else {
                let w = window.ok_or_else(|| {
                    Error::Usage("diagram needs --window unless --sublevel is given".into())
                })?;
                let ls = build_local_system(&input.load()?, &w)?;
                persistence(&short_filtration(&ls)?).to_text()
            }
        }
        Command::Local { input, window, q } => {
            let ls = build_local_system(&input.load()?, &window)?;
            let p = merging_profile(&persistence(&short_filtration(&ls)?), q)?;
            let s = global_section_dim(&ls, q)?;
            format!("{} {} {} {}\n", p.m, p.o, p.i, s.dim_gamma)
        }
        Command::Detect {
            input,
            window_size,
            step,
            output,
        } => {
            let img = input.load()?;
            let cfg = DetectorConfig::detect(window_size, step)?;
            let h: IntHeatmap = detect_holes(&img, &cfg);
            write_heatmap(&h, &output.out, output.format)?;
            String::new()
        }
        Command::Size {
            input,
            scales,
            step,
            output,
            threshold_heat,
        } => {
            let img = input.load()?;
            let mut h: IntHeatmap = multiscale(&img, &scales, step)?;
            if let Some(t) = threshold_heat {
                h.zero_below(t);
            }
            write_heatmap(&h, &output.out, output.format)?;
            String::new()
        }
        Command::Sections { input, parts, q } => {
            let img = input.load()?;
            let parts = parse_parts(&parts, &img)?;
            let sys = NSystem::new(img.black().clone(), parts)?;
            let mut s = String::new();
            for q in q {
                let sec = global_section_dim_n(&sys, q)?;
                s.push_str(&format!("{} {} {}\n", q, sec.dim_gamma, sec.phi_rank));
            }
            s
        }
    };
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}
