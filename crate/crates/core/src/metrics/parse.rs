//! Parsing of distance matrices: whitespace-separated decimals as a full
//! symmetric matrix, an upper or lower triangle (with or without the
//! diagonal), or a PHYLIP-style square matrix with a leading count line and
//! taxa names. Decimals become exact rationals with power-of-ten
//! denominators; `#` starts a comment.

use num_traits::Zero;

use super::DissimilarityMap;
use crate::error::{Error, Result};
use crate::exactgeom::{Int, QVector, Rational};

/// Parse one numeric token: integer, fraction "p/q", or decimal.
pub fn parse_rational_token(tok: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("malformed number {tok:?}"));
    if let Some((p, q)) = tok.split_once('/') {
        let num: Int = p.parse().map_err(|_| bad())?;
        let den: Int = q.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exp10) = match tok.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (tok, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!(
        "{}{}",
        if int_part.is_empty() || int_part == "-" || int_part == "+" {
            format!("{int_part}0")
        } else {
            int_part.to_string()
        },
        frac_part
    );
    let num: Int = digits.parse().map_err(|_| bad())?;
    let shift = frac_part.len() as i32 - exp10;
    let ten = Int::from(10u32);
    Ok(if shift >= 0 {
        Rational::new(num, ten.pow(shift as u32))
    } else {
        Rational::new(num * ten.pow((-shift) as u32), Int::from(1))
    })
}

fn is_numeric_token(tok: &str) -> bool {
    parse_rational_token(tok).is_ok()
}

/// Parse a distance matrix into a dissimilarity map. Taxa name tokens are
/// skipped; the shape (square or triangle) is inferred from the row
/// lengths.
pub fn parse_decimal_metric(text: &str) -> Result<DissimilarityMap> {
    let mut rows: Vec<QVector> = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        let values: QVector = line
            .split_whitespace()
            .filter(|t| is_numeric_token(t))
            .map(parse_rational_token)
            .collect::<Result<_>>()?;
        if !values.is_empty() {
            rows.push(values);
        }
    }
    if rows.is_empty() {
        return Err(Error::Parse("no numeric rows found".into()));
    }
    // PHYLIP files start with a count line; prefer the direct reading and
    // fall back to stripping the count when the shape only works that way.
    let direct = shaped_to_map(&rows);
    if direct.is_err() && rows.len() > 1 && rows[0].len() == 1 && rows[0][0].is_integer() {
        let n = rows[0][0].to_integer();
        if n == Int::from(rows.len() - 1) {
            rows.remove(0);
            return shaped_to_map(&rows);
        }
    }
    direct
}

fn shaped_to_map(rows: &[QVector]) -> Result<DissimilarityMap> {
    let lens: Vec<usize> = rows.iter().map(Vec::len).collect();
    let m = rows.len();

    // full square matrix
    if lens.iter().all(|&l| l == m) && m > 1 {
        return square_to_map(rows);
    }
    // Decreasing lengths m, m-1, ..., 1: an upper triangle. With the
    // diagonal included every row starts with 0 (and n = m); without it the
    // matrix has n = m+1 points.
    if lens == (1..=m).rev().collect::<Vec<_>>() {
        let with_diag = rows.iter().all(|r| r[0].is_zero());
        let n = if with_diag { m } else { m + 1 };
        return triangle_to_map(rows, n, true, with_diag);
    }
    // Increasing lengths 1, 2, ..., m: a lower triangle; with the diagonal
    // every row ends with 0.
    if lens == (1..=m).collect::<Vec<_>>() {
        let with_diag = rows.iter().all(|r| r.last().unwrap().is_zero());
        let n = if with_diag { m } else { m + 1 };
        return triangle_to_map(rows, n, false, with_diag);
    }
    Err(Error::Parse(format!(
        "unrecognized matrix shape with row lengths {lens:?}"
    )))
}

fn square_to_map(rows: &[QVector]) -> Result<DissimilarityMap> {
    let n = rows.len();
    for i in 0..n {
        if !rows[i][i].is_zero() {
            return Err(Error::Parse(format!("nonzero diagonal entry at {i}")));
        }
        for j in (i + 1)..n {
            if rows[i][j] != rows[j][i] {
                return Err(Error::Parse(format!(
                    "matrix is not symmetric at ({i},{j})"
                )));
            }
        }
    }
    let mut values = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            values.push(rows[i][j].clone());
        }
    }
    DissimilarityMap::new(n, values)
}

fn triangle_to_map(
    rows: &[QVector],
    n: usize,
    upper: bool,
    with_diagonal: bool,
) -> Result<DissimilarityMap> {
    let mut full = vec![vec![Rational::zero(); n]; n];
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            let (i, j) = if upper {
                let j = if with_diagonal { r + c } else { r + c + 1 };
                (r, j)
            } else {
                let i = if with_diagonal { r } else { r + 1 };
                (i, c)
            };
            if i == j {
                if !v.is_zero() {
                    return Err(Error::Parse(format!("nonzero diagonal entry at {i}")));
                }
            } else {
                full[i.min(j)][i.max(j)] = v.clone();
            }
        }
    }
    let mut values = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            values.push(full[i][j].clone());
        }
    }
    DissimilarityMap::new(n, values)
}
