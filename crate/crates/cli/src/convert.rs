//! Conversion routes among granular tests, martingales and complexity
//! bounds, registered by endpoint pair.

use std::path::Path;

use randlab::granular::{complexity_to_test, martingale_to_test, test_to_complexity, test_to_martingale};
use randlab::{MachineTable, Martingale, Test};
use serde_json::{json, Value};

use crate::args::ObjectArg;
use crate::io::{read_json, CliError, CliResult};

pub struct Converted {
    /// Canonical encoding of the target object, for `--out`.
    pub output: Value,
    pub report: Value,
}

pub trait ConversionRoute {
    fn endpoints(&self) -> (ObjectArg, ObjectArg);
    fn convert(&self, input: &Path, g: &[usize]) -> CliResult<Converted>;
}

fn need_g(g: &[usize]) -> CliResult<()> {
    if g.is_empty() {
        Err(CliError::Usage("this route needs --g".into()))
    } else {
        Ok(())
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("encodings are plain JSON")
}

fn martingale_report(m: &Martingale) -> Converted {
    let violations = randlab::validate_martingale(m);
    Converted { output: to_value(m), report: json!({"martingale": m, "fair": violations.is_empty()}) }
}

fn complexity_report(machine: &MachineTable, bound: &randlab::granular::ComplexityBound) -> Converted {
    Converted { output: to_value(machine), report: json!({"machine": machine, "bound": bound}) }
}

fn test_report(t: &Test) -> Converted {
    Converted { output: to_value(t), report: json!({"test": t}) }
}

struct TestToMartingale;
impl ConversionRoute for TestToMartingale {
    fn endpoints(&self) -> (ObjectArg, ObjectArg) {
        (ObjectArg::Test, ObjectArg::Martingale)
    }
    fn convert(&self, input: &Path, _: &[usize]) -> CliResult<Converted> {
        let t: Test = read_json(input)?;
        Ok(martingale_report(&test_to_martingale(&t).map_err(CliError::domain)?))
    }
}

struct MartingaleToTest;
impl ConversionRoute for MartingaleToTest {
    fn endpoints(&self) -> (ObjectArg, ObjectArg) {
        (ObjectArg::Martingale, ObjectArg::Test)
    }
    fn convert(&self, input: &Path, g: &[usize]) -> CliResult<Converted> {
        need_g(g)?;
        let m: Martingale = read_json(input)?;
        Ok(test_report(&martingale_to_test(&m, g).map_err(CliError::domain)?))
    }
}

struct TestToComplexity;
impl ConversionRoute for TestToComplexity {
    fn endpoints(&self) -> (ObjectArg, ObjectArg) {
        (ObjectArg::Test, ObjectArg::Complexity)
    }
    fn convert(&self, input: &Path, _: &[usize]) -> CliResult<Converted> {
        let t: Test = read_json(input)?;
        let (machine, bound) = test_to_complexity(&t).map_err(CliError::domain)?;
        Ok(complexity_report(&machine, &bound))
    }
}

struct ComplexityToTest;
impl ConversionRoute for ComplexityToTest {
    fn endpoints(&self) -> (ObjectArg, ObjectArg) {
        (ObjectArg::Complexity, ObjectArg::Test)
    }
    fn convert(&self, input: &Path, g: &[usize]) -> CliResult<Converted> {
        need_g(g)?;
        let m: MachineTable = read_json(input)?;
        Ok(test_report(&complexity_to_test(&m, g).map_err(CliError::domain)?))
    }
}

/// Goes through the test in between.
struct MartingaleToComplexity;
impl ConversionRoute for MartingaleToComplexity {
    fn endpoints(&self) -> (ObjectArg, ObjectArg) {
        (ObjectArg::Martingale, ObjectArg::Complexity)
    }
    fn convert(&self, input: &Path, g: &[usize]) -> CliResult<Converted> {
        need_g(g)?;
        let m: Martingale = read_json(input)?;
        let t = martingale_to_test(&m, g).map_err(CliError::domain)?;
        let (machine, bound) = test_to_complexity(&t).map_err(CliError::domain)?;
        Ok(complexity_report(&machine, &bound))
    }
}

struct ComplexityToMartingale;
impl ConversionRoute for ComplexityToMartingale {
    fn endpoints(&self) -> (ObjectArg, ObjectArg) {
        (ObjectArg::Complexity, ObjectArg::Martingale)
    }
    fn convert(&self, input: &Path, g: &[usize]) -> CliResult<Converted> {
        need_g(g)?;
        let m: MachineTable = read_json(input)?;
        let t = complexity_to_test(&m, g).map_err(CliError::domain)?;
        Ok(martingale_report(&test_to_martingale(&t).map_err(CliError::domain)?))
    }
}

pub fn routes() -> Vec<Box<dyn ConversionRoute>> {
    vec![
        Box::new(TestToMartingale),
        Box::new(MartingaleToTest),
        Box::new(TestToComplexity),
        Box::new(ComplexityToTest),
        Box::new(MartingaleToComplexity),
        Box::new(ComplexityToMartingale),
    ]
}

pub fn find_route(from: ObjectArg, to: ObjectArg) -> CliResult<Box<dyn ConversionRoute>> {
    routes()
        .into_iter()
        .find(|r| r.endpoints() == (from, to))
        .ok_or_else(|| CliError::Usage(format!("no conversion from {} to {}", from.name(), to.name())))
}
