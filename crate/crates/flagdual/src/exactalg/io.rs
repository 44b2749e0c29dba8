//! Plain-text matrices: one row per line, entries separated by whitespace, each an
//! integer or a fraction `a/b`. Blank lines and lines starting with `#` are skipped.

use super::field::Field;
use super::mat::Mat;
use super::AlgError;

pub fn parse_matrix<F: Field>(text: &str) -> Result<Mat<F>, AlgError> {
    let mut rows: Vec<Vec<F>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line.split_whitespace().map(F::parse_entry).collect::<Result<Vec<F>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(AlgError::Dimension(format!(
                    "line {} has {} entries, expected {}",
                    lineno + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(AlgError::Dimension("empty matrix".into()));
    }
    Ok(Mat::from_rows(rows))
}

pub fn format_matrix<F: Field>(m: &Mat<F>) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Fp;
    use num_rational::BigRational;

    #[test]
    fn round_trip_rationals() {
        let text = "# a comment\n1 -1/2\n\n3/4 0\n";
        let m: Mat<BigRational> = parse_matrix(text).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(format_matrix(&m), "1 -1/2\n3/4 0\n");
        assert_eq!(parse_matrix::<BigRational>(&format_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn reduction_on_parse() {
        let m: Mat<Fp<17>> = parse_matrix("1/2 18\n-1 0").unwrap();
        // finite-field entries print as signed representatives
        assert_eq!(format_matrix(&m), "-8 1\n-1 0\n");
    }

    #[test]
    fn ragged_and_garbage_rejected() {
        assert!(matches!(parse_matrix::<Fp<5>>("1 2\n3"), Err(AlgError::Dimension(_))));
        assert!(matches!(parse_matrix::<Fp<5>>("1 x"), Err(AlgError::Parse(_))));
        assert!(matches!(parse_matrix::<Fp<5>>("1/0"), Err(AlgError::DivisionByZero)));
        assert!(parse_matrix::<Fp<5>>("\n# only comments\n").is_err());
    }
}
