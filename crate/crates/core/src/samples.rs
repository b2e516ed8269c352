//! Sampled functions as CSV: a header `x1,…,xd,f` and one row per point.
//!
//! Analysis from samples needs a value at every node of the tensor
//! quadrature grid; no interpolation is attempted.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;

/// Points and values read from a sample file.
#[derive(Clone, Debug, PartialEq)]
pub struct Samples {
    pub dims: usize,
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

fn header(dims: usize, with_value: bool) -> Vec<String> {
    let mut h: Vec<String> = (1..=dims).map(|i| format!("x{i}")).collect();
    if with_value {
        h.push("f".into());
    }
    h
}

pub fn read_samples(reader: impl Read) -> Result<Samples> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let head: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if head.len() < 2 {
        return Err(Error::Parse("sample header needs columns x1..xd followed by f".into()));
    }
    let dims = head.len() - 1;
    if head != header(dims, true) {
        return Err(Error::Parse(format!("sample header must be {}, found {}", header(dims, true).join(","), head.join(","))));
    }
    let mut points = Vec::new();
    let mut values = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let nums = rec
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Parse(format!("sample row {}: {e}", line + 2)))?;
        if nums.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("sample row {}: non-finite number", line + 2)));
        }
        values.push(nums[dims]);
        points.push(nums[..dims].to_vec());
    }
    Ok(Samples { dims, points, values })
}

/// Points only: header `x1,…,xd`.
pub fn read_points(reader: impl Read) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let head: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if head.is_empty() || head != header(head.len(), false) {
        return Err(Error::Parse(format!("point header must be x1,..,xd, found {}", head.join(","))));
    }
    let mut points = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let p = rec?
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Parse(format!("point row {}: {e}", line + 2)))?;
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("point row {}: non-finite number", line + 2)));
        }
        points.push(p);
    }
    Ok(points)
}

pub fn write_samples(writer: impl Write, dims: usize, points: &[Vec<f64>], values: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header(dims, true))?;
    for (p, v) in points.iter().zip(values) {
        let mut row: Vec<String> = p.iter().map(f64::to_string).collect();
        row.push(v.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// The tensor node grid of `rule` in `dims` dimensions, row-major, columns
/// `x1..xd`.
pub fn write_nodes(writer: impl Write, rule: &QuadratureRule, dims: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header(dims, false))?;
    for p in crate::transform::node_grid(rule, dims) {
        w.write_record(p.iter().map(f64::to_string))?;
    }
    w.flush()?;
    Ok(())
}

// Relative tolerance for identifying a sample coordinate with a node.
const NODE_MATCH: f64 = 1e-9;

fn node_index(nodes: &[f64], x: f64) -> Option<usize> {
    let i = nodes.partition_point(|&n| n < x);
    [i.checked_sub(1), Some(i)]
        .into_iter()
        .flatten()
        .filter(|&j| j < nodes.len())
        .find(|&j| (nodes[j] - x).abs() <= NODE_MATCH * nodes[j])
}

/// Orders the samples as the row-major node grid expected by
/// [`analyze_samples`](crate::transform::analyze_samples). Every node must
/// appear exactly once.
pub fn samples_on_grid(s: &Samples, rule: &QuadratureRule) -> Result<Vec<f64>> {
    let m = rule.len();
    let total = m.pow(s.dims as u32);
    let mut out = vec![f64::NAN; total];
    let mut seen = vec![false; total];
    for (p, &v) in s.points.iter().zip(&s.values) {
        let mut off = 0;
        for &x in p {
            let j = node_index(rule.nodes(), x).ok_or_else(|| {
                Error::invalid(format!("sample coordinate {x} is not a node of the {m}-point rule (see the nodes subcommand)"))
            })?;
            off = off * m + j;
        }
        if seen[off] {
            return Err(Error::invalid(format!("duplicate sample at {p:?}")));
        }
        seen[off] = true;
        out[off] = v;
    }
    let missing = seen.iter().filter(|&&b| !b).count();
    if missing > 0 {
        return Err(Error::invalid(format!("{missing} of {total} quadrature nodes have no sample")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_laguerre_rule;

    #[test]
    fn grid_round_trip_through_csv() {
        let rule = gauss_laguerre_rule(4).unwrap();
        let grid = crate::transform::node_grid(&rule, 2);
        let values: Vec<f64> = grid.iter().map(|p| p[0] - 2.0 * p[1]).collect();
        let mut buf = Vec::new();
        write_samples(&mut buf, 2, &grid, &values).unwrap();
        let s = read_samples(buf.as_slice()).unwrap();
        assert_eq!(s.dims, 2);
        assert_eq!(s.values, values);
        // any row order is accepted
        let mut shuffled = s.clone();
        shuffled.points.reverse();
        shuffled.values.reverse();
        assert_eq!(samples_on_grid(&shuffled, &rule).unwrap(), values);
    }

    #[test]
    fn missing_or_foreign_nodes_are_rejected() {
        let rule = gauss_laguerre_rule(3).unwrap();
        let grid = crate::transform::node_grid(&rule, 1);
        let s = Samples { dims: 1, points: grid[..2].to_vec(), values: vec![1.0, 2.0] };
        assert!(samples_on_grid(&s, &rule).unwrap_err().is_validation());
        let s = Samples { dims: 1, points: vec![vec![0.5]], values: vec![1.0] };
        assert!(samples_on_grid(&s, &rule).is_err());
    }

    #[test]
    fn malformed_files_are_parse_errors() {
        for text in ["x1,g\n1,2\n", "x1,f\n1,abc\n", "f\n1\n", "x1,f\n1,2,3\n"] {
            let e = read_samples(text.as_bytes()).unwrap_err();
            assert!(!e.is_validation(), "{text:?} gave {e}");
        }
    }
}
