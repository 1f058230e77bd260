//! Plain-text formats.
//!
//! * Table: `n=<size> count=<T_n>` then one encoding per line.
//! * Count matrix: `rows=<n> cols=<m> nnz=<k>` then `i j value` per stored
//!   entry, row-major.
//! * Measure: CSV `encoding,probability`.
//! * Kernel: CSV whose header row and first column hold encodings.
//! * Curve: CSV `n,r,s_star,route`.
//!
//! Rationals are always written `p/q`; floats use 17 significant digits.

use std::io::{self, BufRead, Write};

use num_rational::BigRational;

use crate::chain::{Measure, RationalKernel};
use crate::error::{Error, Result};
use crate::operators::CountMatrix;
use crate::spectral::{CurveValue, SeparationCurve};
use crate::tree::{CanonicalTree, TreeTable};

pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let (num, den) = s
        .split_once('/')
        .ok_or_else(|| Error::Malformed(format!("{s:?} is not of the form p/q")))?;
    let num = num
        .parse()
        .map_err(|_| Error::Malformed(format!("bad numerator in {s:?}")))?;
    let den: num_bigint::BigInt = den
        .parse()
        .map_err(|_| Error::Malformed(format!("bad denominator in {s:?}")))?;
    if den == 0.into() {
        return Err(Error::Malformed(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_table<W: Write>(table: &TreeTable, mut w: W) -> io::Result<()> {
    writeln!(w, "n={} count={}", table.size(), table.len())?;
    for t in table {
        writeln!(w, "{t}")?;
    }
    Ok(())
}

pub fn read_table<R: BufRead>(r: R) -> Result<TreeTable> {
    let mut lines = r.lines();
    let io_err = |e: io::Error| Error::Malformed(e.to_string());
    let header = lines
        .next()
        .ok_or_else(|| Error::Malformed("missing table header".into()))?
        .map_err(io_err)?;
    let bad_header = || Error::Malformed(format!("bad table header {header:?}"));
    let (size, count) = header.split_once(' ').ok_or_else(bad_header)?;
    let size: usize = size
        .strip_prefix("n=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(bad_header)?;
    let count: usize = count
        .strip_prefix("count=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(bad_header)?;
    let mut trees = Vec::with_capacity(count);
    for line in lines {
        let line = line.map_err(io_err)?;
        if line.is_empty() {
            continue;
        }
        trees.push(CanonicalTree::parse(&line)?);
    }
    if trees.len() != count {
        return Err(Error::Malformed(format!(
            "header announces {count} trees but {} follow",
            trees.len()
        )));
    }
    TreeTable::from_trees(size, trees)
}

pub fn write_count_matrix<W: Write>(m: &CountMatrix, mut w: W) -> io::Result<()> {
    writeln!(w, "rows={} cols={} nnz={}", m.n_rows(), m.n_cols(), m.nnz())?;
    for (i, j, v) in m.entries() {
        writeln!(w, "{i} {j} {v}")?;
    }
    Ok(())
}

pub fn write_measure_csv<W: Write>(pi: &Measure, mut w: W) -> io::Result<()> {
    writeln!(w, "encoding,probability")?;
    for (t, p) in pi.table().iter().zip(pi.probs()) {
        writeln!(w, "{t},{}", format_rational(p))?;
    }
    Ok(())
}

pub fn write_kernel_csv<W: Write>(k: &RationalKernel, mut w: W) -> io::Result<()> {
    let header: Vec<&str> = k.to_table().iter().map(CanonicalTree::encoding).collect();
    writeln!(w, ",{}", header.join(","))?;
    for (t, row) in k.from_table().iter().zip(k.matrix().rows()) {
        let cells: Vec<String> = row.iter().map(format_rational).collect();
        writeln!(w, "{t},{}", cells.join(","))?;
    }
    Ok(())
}

pub fn format_curve_value(v: &CurveValue) -> String {
    match v {
        CurveValue::Exact(q) => format_rational(q),
        CurveValue::Float(x) => format_float(*x),
    }
}

pub fn write_curve_header<W: Write>(mut w: W) -> io::Result<()> {
    writeln!(w, "n,r,s_star,route")
}

pub fn write_curve_rows<W: Write>(curve: &SeparationCurve, mut w: W) -> io::Result<()> {
    for (r, v) in &curve.values {
        writeln!(
            w,
            "{},{r},{},{}",
            curve.n,
            format_curve_value(v),
            curve.route
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{down_up_kernel, plancherel_measure};
    use crate::operators::pruning_matrix;
    use crate::tree::{enumerate_trees, Catalog};

    fn render(f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> String {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn table_format() {
        let table = enumerate_trees(4).unwrap();
        let text = render(|b| write_table(&table, b));
        assert_eq!(
            text,
            "n=4 count=4\n(((())))\n((()()))\n((())())\n(()()())\n"
        );
        assert_eq!(read_table(text.as_bytes()).unwrap(), table);
        assert!(read_table("n=4 count=3\n(((())))\n".as_bytes()).is_err());
        assert!(read_table("size=4\n".as_bytes()).is_err());
        assert!(read_table("n=3 count=1\n(()(()))\n".as_bytes()).is_err());
    }

    #[test]
    fn matrix_format() {
        let cat = Catalog::up_to(4).unwrap();
        let text = render(|b| write_count_matrix(&pruning_matrix(&cat, 4).unwrap(), b));
        assert_eq!(
            text,
            "rows=4 cols=2 nnz=5\n0 0 1\n1 0 2\n2 0 1\n2 1 1\n3 1 3\n"
        );
    }

    #[test]
    fn measure_and_kernel_csv() {
        let cat = Catalog::up_to(3).unwrap();
        let pi = plancherel_measure(&cat, 3).unwrap();
        assert_eq!(
            render(|b| write_measure_csv(&pi, b)),
            "encoding,probability\n((())),1/3\n(()()),2/3\n"
        );
        let k = down_up_kernel(&cat, 3).unwrap();
        assert_eq!(
            render(|b| write_kernel_csv(&k, b)),
            ",((())),(()())\n((())),1/3,2/3\n(()()),1/3,2/3\n"
        );
    }

    #[test]
    fn rationals() {
        let q = parse_rational("-6/8").unwrap();
        assert_eq!(format_rational(&q), "-3/4");
        assert!(parse_rational("3").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
    }
}
