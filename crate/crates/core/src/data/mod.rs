//! Measurement ingestion and the tables the fitter consumes.

mod csv_io;
mod ecdf;
mod histogram;
mod inflection;
mod targets;

pub use csv_io::{bundled_iris, load_csv, parse_csv, CsvSchema, IRIS_CSV};
pub use ecdf::{build_ecdf, EmpiricalCdf, SampleColumn};
pub use histogram::{auto_histogram, percentile, HistogramSpec};
pub use inflection::{
    select_inflections, select_inflections_mode, select_inflections_slope, InflectionSet, Strategy,
};
pub use targets::{
    gen_erf_target, gen_sigmoid_target, linspace, normal_cdf, TargetTable, DEFAULT_TARGET_POINTS,
};

/// Paired abscissae and ordinates that a curve is fitted against.
pub trait Observations {
    fn xs(&self) -> &[f64];
    fn ys(&self) -> &[f64];

    fn len(&self) -> usize {
        self.xs().len()
    }

    fn is_empty(&self) -> bool {
        self.xs().is_empty()
    }

    /// `[min, max]` of the abscissae.
    fn x_range(&self) -> Option<(f64, f64)> {
        let xs = self.xs();
        Some((*xs.first()?, *xs.last()?))
    }
}
