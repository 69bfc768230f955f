//! Text parser for the `.pd` format.
//!
//! One crossing per line: `X a b c d` with 1-based positive edge labels.
//! Lines starting with `#` are comments; blank lines are skipped. An optional
//! `O e1 e2 ...` line lists the edge traversal cycle and is required whenever
//! labels are not numbered consecutively along the knot.

use super::{Edge, PDCode, PdError};

/// Parses `.pd` text into a validated [`PDCode`].
pub fn parse_pd(text: &str) -> Result<PDCode, PdError> {
    let mut tuples: Vec<[Edge; 4]> = Vec::new();
    let mut orientation: Option<Vec<Edge>> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if stripped.trim().is_empty() {
            continue;
        }
        let mut tokens = tokenize(stripped);
        let (col, head) = tokens.next().expect("nonblank line has a token");
        match head {
            "X" | "x" => {
                let mut labels = [0 as Edge; 4];
                for slot in labels.iter_mut() {
                    let (tcol, tok) = tokens.next().ok_or(PdError::Syntax {
                        line,
                        col: stripped.len() + 1,
                        msg: "crossing needs four edge labels".into(),
                    })?;
                    *slot = parse_label(tok, line, tcol)?;
                }
                if let Some((tcol, tok)) = tokens.next() {
                    return Err(PdError::Syntax {
                        line,
                        col: tcol,
                        msg: format!("unexpected token `{tok}` after crossing"),
                    });
                }
                tuples.push(labels);
            }
            "O" | "o" => {
                if orientation.is_some() {
                    return Err(PdError::Syntax {
                        line,
                        col,
                        msg: "duplicate orientation line".into(),
                    });
                }
                let mut cycle = Vec::new();
                for (tcol, tok) in tokens {
                    cycle.push(parse_label(tok, line, tcol)?);
                }
                orientation = Some(cycle);
            }
            other => {
                return Err(PdError::Syntax {
                    line,
                    col,
                    msg: format!("expected `X` or `O`, found `{other}`"),
                });
            }
        }
    }

    PDCode::new(&tuples, orientation.as_deref())
}

fn parse_label(tok: &str, line: usize, col: usize) -> Result<Edge, PdError> {
    match tok.parse::<Edge>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(PdError::Syntax {
            line,
            col,
            msg: format!("`{tok}` is not a positive edge label"),
        }),
    }
}

/// Whitespace tokenizer reporting 1-based column positions.
fn tokenize(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |tok| {
        let col = tok.as_ptr() as usize - line.as_ptr() as usize + 1;
        (col, tok)
    })
}
