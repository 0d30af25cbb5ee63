//! Text formats: lower-triangular and square distance matrices, weighted tree edge lists.

use std::collections::HashMap;

use crate::metric::{FiniteMetricSpace, LoadOptions, MetricError, TreeEdge, WeightedTree};
use crate::value::{DistanceValue, NumericMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    /// Row `i` (1-based, starting at the second point) holds `d(p_i, p_0..p_{i-1})`.
    LowerTriangular,
    /// `n` rows of `n` values.
    Square,
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

/// Splits every non-blank line on commas and whitespace; `#` starts a comment.
fn tokenize(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut rows = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut row = Vec::new();
        let mut start = None;
        for (pos, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            let sep = ch.is_whitespace() || ch == ',';
            match (sep, start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    row.push(Token { text: &line[s..pos], line: lineno + 1, column: s + 1 });
                    start = None;
                }
                _ => {}
            }
        }
        if !row.is_empty() {
            rows.push(row);
        }
    }
    rows
}

/// Labels `a, b, c, ...` for up to 26 points, `p0, p1, ...` beyond.
pub(crate) fn default_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..n).map(|i| format!("p{i}")).collect()
    }
}

fn parse_value(token: &Token<'_>, mode: NumericMode) -> Result<DistanceValue, MetricError> {
    mode.parse(token.text).map_err(|e| MetricError::parse(token.line, token.column, e))
}

/// Parses and validates a distance matrix.
pub fn load_metric(
    text: &str,
    format: MatrixFormat,
    mode: NumericMode,
    options: LoadOptions,
) -> Result<FiniteMetricSpace, MetricError> {
    let rows = tokenize(text);
    let n = match format {
        MatrixFormat::LowerTriangular => rows.len() + 1,
        MatrixFormat::Square => rows.len(),
    };
    if n == 0 {
        return Err(MetricError::Empty);
    }
    let mut matrix = vec![mode.zero(); n * n];
    match format {
        MatrixFormat::LowerTriangular => {
            for (k, row) in rows.iter().enumerate() {
                let i = k + 1;
                if row.len() != i {
                    let at = row.get(i).unwrap_or(&row[row.len() - 1]);
                    return Err(MetricError::Parse {
                        line: at.line,
                        column: at.column,
                        message: format!("expected {i} values in row {i}, found {}", row.len()),
                    });
                }
                for (j, token) in row.iter().enumerate() {
                    let v = parse_value(token, mode)?;
                    matrix[i * n + j] = v.clone();
                    matrix[j * n + i] = v;
                }
            }
        }
        MatrixFormat::Square => {
            for (i, row) in rows.iter().enumerate() {
                if row.len() != n {
                    let at = row.get(n).unwrap_or(&row[row.len() - 1]);
                    return Err(MetricError::Parse {
                        line: at.line,
                        column: at.column,
                        message: format!("expected {n} values per row, found {}", row.len()),
                    });
                }
                for (j, token) in row.iter().enumerate() {
                    matrix[i * n + j] = parse_value(token, mode)?;
                }
            }
        }
    }
    FiniteMetricSpace::new(default_names(n), matrix, mode, options)
}

/// Parses a weighted tree: one edge `name_u name_v length` per line, optional `root name` line.
///
/// Vertex indices follow the order of first appearance in the edge list.
pub fn parse_tree(text: &str, mode: NumericMode) -> Result<WeightedTree, MetricError> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut root: Option<Token<'_>> = None;
    let mut intern = |name: &str, names: &mut Vec<String>| -> usize {
        *index.entry(name.to_string()).or_insert_with(|| {
            names.push(name.to_string());
            names.len() - 1
        })
    };
    for row in tokenize(text) {
        if row[0].text == "root" {
            if row.len() != 2 {
                return Err(MetricError::Parse {
                    line: row[0].line,
                    column: row[0].column,
                    message: "expected `root <name>`".into(),
                });
            }
            if root.is_some() {
                return Err(MetricError::Parse {
                    line: row[0].line,
                    column: row[0].column,
                    message: "duplicate root line".into(),
                });
            }
            root = row.into_iter().nth(1);
            continue;
        }
        if row.len() != 3 {
            return Err(MetricError::Parse {
                line: row[0].line,
                column: row[0].column,
                message: format!("expected `name_u name_v length`, found {} fields", row.len()),
            });
        }
        let length = parse_value(&row[2], mode)?;
        let u = intern(row[0].text, &mut names);
        let v = intern(row[1].text, &mut names);
        edges.push(TreeEdge { u, v, length });
    }
    let root_index = match root {
        Some(token) => Some(match names.iter().position(|n| n == token.text) {
            Some(i) => i,
            None if edges.is_empty() => {
                names.push(token.text.to_string());
                0
            }
            None => {
                return Err(MetricError::Parse {
                    line: token.line,
                    column: token.column,
                    message: format!("root {:?} is not a tree vertex", token.text),
                })
            }
        }),
        None => None,
    };
    if names.is_empty() {
        return Err(MetricError::Empty);
    }
    WeightedTree::new(names, edges, root_index, mode)
}

/// Writes `space` as a lower-triangular matrix, one comma-separated row per point after the first.
pub fn format_lower_triangular(space: &FiniteMetricSpace) -> String {
    let mut out = String::new();
    for i in 1..space.len() {
        let row: Vec<String> = (0..i).map(|j| space.dist(i, j).to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Writes `tree` in the edge-list format read by [`parse_tree`].
pub fn format_tree(tree: &WeightedTree) -> String {
    let names = tree.names();
    let mut out = String::new();
    if let Some(r) = tree.root() {
        out.push_str(&format!("root {}\n", names[r]));
    }
    for e in tree.edges() {
        out.push_str(&format!("{} {} {}\n", names[e.u], names[e.v], e.length));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> DistanceValue {
        DistanceValue::from_int(v)
    }

    #[test]
    fn writers_round_trip() {
        let t = parse_tree("root b\na b 1\nb c 3/2\nb d 4", NumericMode::Rational).unwrap();
        let back = parse_tree(&format_tree(&t), NumericMode::Rational).unwrap();
        assert_eq!(back.edges(), t.edges());
        assert_eq!(back.root(), Some(1));
        let x = crate::metric::tree_metric(&t);
        let y = load_metric(&format_lower_triangular(&x), MatrixFormat::LowerTriangular, NumericMode::Rational, LoadOptions::default())
            .unwrap();
        for (i, j) in x.pairs() {
            assert_eq!(x.dist(i, j), y.dist(i, j));
        }
    }

    #[test]
    fn lower_triangular_star() {
        let x = load_metric("1\n2,1\n2,1,2", MatrixFormat::LowerTriangular, NumericMode::Rational, LoadOptions::default())
            .unwrap();
        assert_eq!(x.len(), 4);
        let expect = [((0, 1), 1), ((0, 2), 2), ((0, 3), 2), ((1, 2), 1), ((1, 3), 1), ((2, 3), 2)];
        for ((i, j), d) in expect {
            assert_eq!(x.dist(i, j), &q(d));
            assert_eq!(x.dist(j, i), &q(d));
        }
        assert_eq!(x.names(), ["a", "b", "c", "d"]);
    }

    #[test]
    fn singleton_square() {
        let x = load_metric("0", MatrixFormat::Square, NumericMode::Rational, LoadOptions::default()).unwrap();
        assert_eq!(x.len(), 1);
        let x = load_metric("", MatrixFormat::LowerTriangular, NumericMode::Rational, LoadOptions::default());
        assert_eq!(x.unwrap().len(), 1);
    }

    #[test]
    fn triangle_violation_names_triple() {
        let err = load_metric("1\n10 1", MatrixFormat::LowerTriangular, NumericMode::Rational, LoadOptions::default())
            .unwrap_err();
        assert_eq!(
            err,
            MetricError::Triangle { a: "a".into(), b: "b".into(), c: "c".into() }
        );
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = load_metric("1\n2, x", MatrixFormat::LowerTriangular, NumericMode::Rational, LoadOptions::default())
            .unwrap_err();
        assert!(matches!(err, MetricError::Parse { line: 2, column: 4, .. }), "{err:?}");
        let err = load_metric("1\n2", MatrixFormat::LowerTriangular, NumericMode::Rational, LoadOptions::default())
            .unwrap_err();
        assert!(matches!(err, MetricError::Parse { line: 2, .. }), "{err:?}");
        let err = load_metric("0 1\n1", MatrixFormat::Square, NumericMode::Rational, LoadOptions::default())
            .unwrap_err();
        assert!(matches!(err, MetricError::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn comments_and_whitespace() {
        let text = "# star\n 1\n2  1 # second row\n\n2,1,2\n";
        let x = load_metric(text, MatrixFormat::LowerTriangular, NumericMode::decimal(), LoadOptions::default())
            .unwrap();
        assert_eq!(x.len(), 4);
        assert!(!x.mode().is_rational());
    }

    #[test]
    fn tree_file_with_root() {
        let t = parse_tree("root b\na b 1\nb c 2.5\nb d 4", NumericMode::Rational).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.root(), Some(1));
        assert_eq!(t.edges()[1].length, DistanceValue::ratio(5, 2));
        let single = parse_tree("root a", NumericMode::Rational).unwrap();
        assert_eq!(single.len(), 1);
        assert!(parse_tree("root z\na b 1", NumericMode::Rational).is_err());
        assert!(parse_tree("a b", NumericMode::Rational).is_err());
    }
}
