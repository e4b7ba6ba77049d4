//! Gnuplot scripts for the figure replicas.

use std::fmt::Write;
use std::str::FromStr;

use thiserror::Error;

use crate::sweep::SweepRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Scser,
    Ber,
}

impl Metric {
    pub fn label(self) -> &'static str {
        match self {
            Self::Scser => "SCSER",
            Self::Ber => "BER",
        }
    }

    pub fn value(self, r: &SweepRecord) -> f64 {
        match self {
            Self::Scser => r.scser,
            Self::Ber => r.ber,
        }
    }
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [Self::Fig3, Self::Fig4, Self::Fig5, Self::Fig6, Self::Fig7];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
            Self::Fig5 => "fig5",
            Self::Fig6 => "fig6",
            Self::Fig7 => "fig7",
        }
    }

    pub fn caption(self) -> &'static str {
        match self {
            Self::Fig3 => "Simulated and analytical SCSER, uncorrelated channels",
            Self::Fig4 => "SCSER of different signal detectors, correlated channels",
            Self::Fig5 => "BER of CS and SCS detectors at several data rates",
            Self::Fig6 => "BER with N_r = 3 for different group sizes",
            Self::Fig7 => "BER of the SCS detector and ML detection",
        }
    }

    pub fn metric(self) -> Metric {
        match self {
            Self::Fig3 | Self::Fig4 => Metric::Scser,
            _ => Metric::Ber,
        }
    }

    /// `(record label, legend title)` of every series, in legend order.
    pub fn series(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Self::Fig3 => &[
                ("sp", "CS-based (SP)"),
                ("ssp_noninterleaved", "MMV, SSP"),
                ("ssp", "GMMV interleaving, SSP"),
                ("ssp_iid_channels", "GMMV i.i.d., SSP"),
                ("analytic_gmmv", "GMMV analytical"),
            ],
            Self::Fig4 => &[
                ("lmmse", "LMMSE"),
                ("ncs_omp", "CS-based (NCS-OMP)"),
                ("ssp_noninterleaved", "SCS without interleaving"),
                ("ssp", "SCS with interleaving"),
                ("ssp_iid_channels", "SCS, i.i.d. channels"),
            ],
            Self::Fig5 => &[
                ("ncs_omp[7bpcu]", "CS-based, 7 bpcu"),
                ("ncs_omp[11bpcu]", "CS-based, 11 bpcu"),
                ("ssp[9.5bpcu]", "SCS, 9.5 bpcu"),
                ("ssp[11.5bpcu]", "SCS, 11.5 bpcu"),
            ],
            Self::Fig6 => &[
                ("ncs_omp", "CS-based"),
                ("ssp[G=1]", "SCS, G = 1"),
                ("ssp[G=2]", "SCS, G = 2"),
                ("ssp[G=4]", "SCS, G = 4"),
            ],
            Self::Fig7 => &[
                ("ssp[G=1]", "SCS, G = 1"),
                ("ssp[G=2]", "SCS, G = 2"),
                ("ssp[G=3]", "SCS, G = 3"),
                ("ml[G=3]", "ML, G = 3"),
            ],
        }
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| format!("unknown figure `{s}`"))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PlotError {
    #[error("no record matches any series of {0}")]
    NoSeries(&'static str),
}

/// Emits a standalone gnuplot script drawing `records` as figure `fig`.
///
/// Series without records are listed in a header comment. Points with a
/// zero error rate are left out of the log-scale plot.
pub fn plot_script(records: &[SweepRecord], fig: FigureId) -> Result<String, PlotError> {
    let metric = fig.metric();
    let mut present = Vec::new();
    let mut missing = Vec::new();
    for &(label, title) in fig.series() {
        let mut pts: Vec<(f64, f64)> =
            records.iter().filter(|r| r.detector == label).map(|r| (r.snr_db, metric.value(r))).collect();
        if pts.is_empty() {
            missing.push(label);
        } else {
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            present.push((label, title, pts));
        }
    }
    if present.is_empty() {
        return Err(PlotError::NoSeries(fig.name()));
    }

    let mut s = String::new();
    let _ = writeln!(s, "# {}: {}", fig.name(), fig.caption());
    if !missing.is_empty() {
        let _ = writeln!(s, "# missing series: {}", missing.join(", "));
    }
    let _ = writeln!(s, "set terminal pngcairo size 800,600");
    let _ = writeln!(s, "set output '{}.png'", fig.name());
    let _ = writeln!(s, "set title '{}'", fig.caption());
    let _ = writeln!(s, "set xlabel 'SNR (dB)'");
    let _ = writeln!(s, "set ylabel '{}'", metric.label());
    let _ = writeln!(s, "set logscale y");
    let _ = writeln!(s, "set format y '10^{{%L}}'");
    let _ = writeln!(s, "set grid");
    let _ = writeln!(s, "set key bottom left");
    for (i, (label, _, pts)) in present.iter().enumerate() {
        let _ = writeln!(s, "# {label}");
        let _ = writeln!(s, "$d{i} << EOD");
        for &(x, y) in pts.iter().filter(|p| p.1 > 0.0) {
            let _ = writeln!(s, "{x} {y}");
        }
        let _ = writeln!(s, "EOD");
    }
    let plots: Vec<String> = present
        .iter()
        .enumerate()
        .map(|(i, (_, title, _))| format!("$d{i} using 1:2 with linespoints title '{title}'"))
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    Ok(s)
}
