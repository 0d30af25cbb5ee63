use std::path::Path;

use ripscollapse::complex::{SimplexOrder, VertexOrder};
use ripscollapse::datasets;
use ripscollapse::metric::{
    compatible_order, load_metric, parse_tree, tree_metric, FiniteMetricSpace, LoadOptions, MatrixFormat,
    WeightedTree,
};
use ripscollapse::{DistanceValue, NumericMode};
use sha2::{Digest, Sha256};

use crate::args::{GlobalOpts, InputFormat, ModeArg, OrderKind, OrderOpts};
use crate::error::CliError;

/// A parsed input: the metric space, and the tree when the file was an edge list.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub space: FiniteMetricSpace,
    pub tree: Option<WeightedTree>,
    /// `sha256:` hex digest of the file bytes, or of the generator description.
    pub digest: String,
}

pub fn mode(global: &GlobalOpts) -> NumericMode {
    match global.mode {
        ModeArg::Rational => NumericMode::Rational,
        ModeArg::Decimal => NumericMode::Decimal { eps: global.eps },
    }
}

pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

pub fn parse_text(text: &str, global: &GlobalOpts) -> Result<Loaded, CliError> {
    let mode = mode(global);
    let options = LoadOptions { allow_pseudo: global.allow_pseudo };
    let (space, tree) = match global.format {
        InputFormat::Lower => (load_metric(text, MatrixFormat::LowerTriangular, mode, options)?, None),
        InputFormat::Square => (load_metric(text, MatrixFormat::Square, mode, options)?, None),
        InputFormat::Tree => {
            let tree = parse_tree(text, mode)?;
            (tree_metric(&tree), Some(tree))
        }
    };
    Ok(Loaded { space, tree, digest: digest(text.as_bytes()) })
}

pub fn load(path: &Path, global: &GlobalOpts) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_text(&text, global)
}

/// A generated tree instance, digested by its description.
pub fn generated_tree(n: usize, seed: u64) -> Loaded {
    let tree = datasets::random_tree(n, seed, Default::default());
    Loaded {
        space: tree_metric(&tree),
        tree: Some(tree),
        digest: digest(format!("random-tree n={n} seed={seed} weights=1..=10").as_bytes()),
    }
}

/// A generated tree with distinct powers of two as weights, so all distances differ.
pub fn generated_generic_tree(n: usize, seed: u64) -> Loaded {
    let tree = datasets::random_generic_tree(n, seed);
    Loaded {
        space: tree_metric(&tree),
        tree: Some(tree),
        digest: digest(format!("random-generic-tree n={n} seed={seed}").as_bytes()),
    }
}

/// A generated metric instance, digested by its description.
pub fn generated_metric(n: usize, seed: u64) -> Loaded {
    Loaded {
        space: datasets::random_metric(n, seed, Default::default()),
        tree: None,
        digest: digest(format!("random-metric n={n} seed={seed} weights=1..=10").as_bytes()),
    }
}

pub fn parse_value(text: &str, space: &FiniteMetricSpace) -> Result<DistanceValue, CliError> {
    space.mode().parse(text).map_err(|e| CliError::Input(format!("invalid value {text:?}: {e}")))
}

pub fn point(space: &FiniteMetricSpace, name: Option<&str>) -> Result<usize, CliError> {
    match name {
        None => Ok(0),
        Some(name) => space.index_of(name).ok_or_else(|| CliError::Input(format!("unknown point {name:?}"))),
    }
}

/// The root for compatible orders: `--root`, else the tree file's root, else the first vertex.
pub fn root(loaded: &Loaded, name: Option<&str>) -> Result<usize, CliError> {
    match name {
        Some(_) => point(&loaded.space, name),
        None => Ok(loaded.tree.as_ref().and_then(|t| t.root()).unwrap_or(0)),
    }
}

pub fn require_tree(loaded: &Loaded) -> Result<&WeightedTree, CliError> {
    loaded.tree.as_ref().ok_or_else(|| CliError::Input("this operation needs tree input (--format tree)".into()))
}

/// Resolves the vertex order and comparison convention from the order flags.
pub fn vertex_order(
    loaded: &Loaded,
    opts: &OrderOpts,
    default: OrderKind,
    seed: u64,
) -> Result<(VertexOrder, SimplexOrder), CliError> {
    let n = loaded.space.len();
    if let Some(list) = &opts.vertex_order {
        let sequence = list
            .split(',')
            .map(|name| point(&loaded.space, Some(name.trim())))
            .collect::<Result<Vec<_>, _>>()?;
        let order = VertexOrder::from_sequence(sequence)
            .map_err(|e| CliError::Input(format!("--vertex-order is not a permutation of the points ({})", e.0)))?;
        if order.len() != n {
            return Err(CliError::Input(format!("--vertex-order lists {} of {n} points", order.len())));
        }
        return Ok((order, SimplexOrder::Lexicographic));
    }
    Ok(match opts.order_kind.unwrap_or(default) {
        OrderKind::Identity => (VertexOrder::identity(n), SimplexOrder::Lexicographic),
        OrderKind::Random => (datasets::random_order(n, seed), SimplexOrder::Lexicographic),
        OrderKind::Compatible => {
            let tree = require_tree(loaded)?;
            (compatible_order(tree, root(loaded, opts.root.as_deref())?), SimplexOrder::Lexicographic)
        }
        OrderKind::ReverseCompatible => {
            let tree = require_tree(loaded)?;
            let order = compatible_order(tree, root(loaded, opts.root.as_deref())?).reversed();
            (order, SimplexOrder::ReverseColexicographic)
        }
    })
}
