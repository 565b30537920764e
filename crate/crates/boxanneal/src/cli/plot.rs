//! Self-contained gnuplot script generation for the standard figure layouts.

use std::path::Path;

use crate::error::{domain, Result};

/// Known plot styles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotStyle {
    /// Residual energy vs annealing time, log-log, with a T⁻² guide line.
    ResidualLogLog,
    /// Energy levels vs s, logarithmic s axis.
    SpectrumLogX,
    /// Gaps vs s, log-log, suitable for reading off plateaus.
    GapLogLog,
}

impl std::str::FromStr for PlotStyle {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "residual-loglog" => Ok(Self::ResidualLogLog),
            "spectrum-logx" => Ok(Self::SpectrumLogX),
            "gap-loglog" => Ok(Self::GapLogLog),
            other => Err(domain(format!(
                "unknown plot style `{other}` (expected residual-loglog, spectrum-logx, gap-loglog)"
            ))),
        }
    }
}

/// Emits a gnuplot script that renders `data_csv` (written by the CLI) into
/// `data_csv`.png. `columns` is the number of dependent columns to draw.
pub fn emit_plot_script(
    script_path: &Path,
    data_csv: &Path,
    style: PlotStyle,
    columns: usize,
) -> Result<()> {
    let data = data_csv.display();
    let png = format!("{data}.png");
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str(&format!("set output '{png}'\nset terminal pngcairo size 900,650\n"));
    s.push_str("set key top right\n");
    match style {
        PlotStyle::ResidualLogLog => {
            s.push_str("set logscale xy\nset xlabel 'T'\nset ylabel 'residual energy'\n");
            s.push_str(&format!(
                "plot '{data}' skip 1 using 1:3 with linespoints title 'R(T)', \\\n"
            ));
            // T⁻² guide through the last data point's decade.
            s.push_str("     1.40676/(x*x) with lines dashtype 2 title '1.40676/T^2'\n");
        }
        PlotStyle::SpectrumLogX => {
            s.push_str("set logscale x\nset xlabel 's'\nset ylabel 'E_n'\nplot \\\n");
            for c in 0..columns {
                let sep = if c + 1 == columns { "\n" } else { ", \\\n" };
                s.push_str(&format!(
                    "  '{data}' skip 1 using 1:{} with lines title 'E_{c}'{sep}",
                    c + 2
                ));
            }
        }
        PlotStyle::GapLogLog => {
            s.push_str("set logscale xy\nset xlabel 's'\nset ylabel 'gap'\nplot \\\n");
            for c in 0..columns {
                let sep = if c + 1 == columns { "\n" } else { ", \\\n" };
                s.push_str(&format!(
                    "  '{data}' skip 1 using 1:{} with lines title 'D_{}'{sep}",
                    c + 2,
                    c + 1
                ));
            }
        }
    }
    std::fs::write(script_path, s)?;
    Ok(())
}
