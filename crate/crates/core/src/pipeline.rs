use crate::bifiltration::{grade_del, grade_delcech, validate, write_scc2020, GradedComplex};
use crate::complex::{IncrementalComplex, OrderedPoints};
use crate::error::{Error, Result};
use std::io::Write;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Grading {
    /// Minimum enclosing ball radius.
    #[default]
    DelCech,
    /// Smallest witness sphere radius.
    Del,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PhaseTimes {
    pub construction: Duration,
    pub grading: Duration,
    pub serialization: Duration,
}

#[derive(Debug)]
pub struct Outcome {
    pub complex: IncrementalComplex,
    pub graded: GradedComplex,
    pub times: PhaseTimes,
}

/// Builds, grades and validates.
pub fn build_and_grade(points: OrderedPoints, grading: Grading) -> Result<Outcome> {
    let start = Instant::now();
    let complex = IncrementalComplex::build(points)?;
    let construction = start.elapsed();

    let start = Instant::now();
    let graded = match grading {
        Grading::DelCech => grade_delcech(&complex),
        Grading::Del => grade_del(&complex)?,
    };
    let grading_time = start.elapsed();

    if let Some(v) = validate(&graded).first() {
        return Err(Error::InvalidArgument(format!(
            "graded complex is invalid: {v}"
        )));
    }
    Ok(Outcome {
        complex,
        graded,
        times: PhaseTimes {
            construction,
            grading: grading_time,
            serialization: Duration::ZERO,
        },
    })
}

/// [`build_and_grade`] followed by `scc2020` output.
pub fn run<W: Write>(
    points: OrderedPoints,
    grading: Grading,
    out: W,
    comments: &[String],
) -> Result<Outcome> {
    let mut outcome = build_and_grade(points, grading)?;
    let start = Instant::now();
    write_scc2020(&outcome.graded, out, comments)?;
    outcome.times.serialization = start.elapsed();
    Ok(outcome)
}
