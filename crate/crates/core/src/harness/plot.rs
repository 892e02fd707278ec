//! Gnuplot scripts for the CSV tables written by the experiment runners.

use std::fmt::Write;
use std::str::FromStr;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    /// Mean clique size against `log2 N`, one series per algorithm.
    Staircase,
    /// Fractions at `K_max − 1, K_max, K_max + 1` against the bound envelopes.
    StepFractions,
    /// Success fraction against `α`, one series per method.
    Recovery,
    /// `λ₁ − λ₂` against `α`.
    Gap,
    /// Rank plateau against `α`, one series per hint strength.
    Rank,
    /// Stop probability against `K − log2 N`.
    StopCurves,
    /// Wall time against `N` on log-log axes.
    Cost,
}

impl FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "staircase" => PlotKind::Staircase,
            "step-fractions" => PlotKind::StepFractions,
            "recovery" => PlotKind::Recovery,
            "gap" => PlotKind::Gap,
            "rank" => PlotKind::Rank,
            "stop-curves" => PlotKind::StopCurves,
            "cost" => PlotKind::Cost,
            other => return Err(Error::invalid(format!("unknown plot kind `{other}`"))),
        })
    }
}

/// A self-contained gnuplot script that reads `csv_path` and writes a PNG
/// next to it.
pub fn plot_script(kind: PlotKind, csv_path: &str) -> String {
    let png = match csv_path.strip_suffix(".csv") {
        Some(stem) => format!("{stem}.png"),
        None => format!("{csv_path}.png"),
    };
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set terminal pngcairo size 900,600");
    let _ = writeln!(s, "set output '{png}'");
    let _ = writeln!(s, "set key top left");
    let body = match kind {
        PlotKind::Staircase => {
            "set xlabel 'log2 N'\nset ylabel 'clique size'\n\
             plot '{csv}' using 7:(stringcolumn(3) eq 'sm0' ? $5 : 1/0):6 with yerrorbars title 'sm0', \\\n\
             \x20    '' using 7:(stringcolumn(3) ne 'sm0' ? $5 : 1/0):6 with yerrorbars title 'others', \\\n\
             \x20    '' using 7:8 with steps title 'K_max', \\\n\
             \x20    '' using 7:9 with lines title 'R'"
        }
        PlotKind::StepFractions => {
            "set xlabel 'N'\nset ylabel 'fraction'\nset logscale x\nset yrange [0:1]\n\
             plot '{csv}' using 1:7 with points title 'K_max', \\\n\
             \x20    '' using 1:11:12 with filledcurves fs transparent solid 0.2 title 'envelope', \\\n\
             \x20    '' using 1:6 with points title 'K_max - 1', \\\n\
             \x20    '' using 1:8 with points title 'K_max + 1'"
        }
        PlotKind::Recovery => {
            "set xlabel 'alpha'\nset ylabel 'success fraction'\nset yrange [0:1.05]\n\
             plot for [m in 'amp sm1-es sm2-es spectral'] '{csv}' \
             using 3:(stringcolumn(4) eq m ? $6 : 1/0) with linespoints title m"
        }
        PlotKind::Gap => {
            "set xlabel 'alpha'\nset ylabel 'lambda1 - lambda2'\n\
             plot '{csv}' using 3:($4 == 0 ? $9 : 1/0) with points title 'gap'"
        }
        PlotKind::Rank => {
            "set xlabel 'alpha'\nset ylabel 'plateau'\nset yrange [0:1.05]\n\
             plot '{csv}' using 3:10:4 with points palette title 'plateau (colour = E0)'"
        }
        PlotKind::StopCurves => {
            "set xlabel 'K - log2 N'\nset ylabel 'stop probability'\n\
             plot '{csv}' using 2:4 with points title 'all N'"
        }
        PlotKind::Cost => {
            "set xlabel 'N'\nset ylabel 'seconds'\nset logscale xy\n\
             plot '{csv}' using 1:4 with linespoints title 'mean time'"
        }
    };
    s.push_str(&body.replace("{csv}", csv_path));
    s.push('\n');
    s
}
