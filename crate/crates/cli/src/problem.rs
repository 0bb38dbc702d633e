//! Problem-file parsing: a graph edge list for MaxCut, or a key-value
//! size file for the linear-system benchmark.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// A MaxCut instance read from disk.
#[derive(Debug)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

/// Parses a graph file: optional `n <count>` line, then one `u v` edge
/// per line. `#` starts a comment. Without an `n` line the vertex count
/// is the largest endpoint plus one.
pub fn parse_graph_file(path: &Path) -> Result<GraphFile> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading problem file {}", path.display()))?;
    let mut declared_n: Option<usize> = None;
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = || format!("{}:{}", path.display(), lineno + 1);
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["n", count] => {
                if declared_n.is_some() {
                    bail!("{}: vertex count declared twice", at());
                }
                declared_n =
                    Some(count.parse().with_context(|| {
                        format!("{}: bad vertex count {:?}", at(), count)
                    })?);
            }
            [a, b] => {
                let a: usize = a
                    .parse()
                    .with_context(|| format!("{}: bad endpoint {:?}", at(), a))?;
                let b: usize = b
                    .parse()
                    .with_context(|| format!("{}: bad endpoint {:?}", at(), b))?;
                edges.push((a, b));
            }
            _ => bail!("{}: expected `n <count>` or `u v`, got {:?}", at(), line),
        }
    }
    if edges.is_empty() {
        bail!("{}: graph file has no edges", path.display());
    }
    let implied = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    let n = match declared_n {
        Some(n) if n < implied => bail!(
            "{}: declared n = {} but edges reach vertex {}",
            path.display(),
            n,
            implied - 1
        ),
        Some(n) => n,
        None => implied,
    };
    Ok(GraphFile { n, edges })
}

/// Size selections read from a linear-system problem file.
#[derive(Debug, Default)]
pub struct VqlsFile {
    pub qubits: Option<usize>,
    pub layers: Option<usize>,
}

/// Parses `qubits <n>` / `layers <l>` lines; `#` starts a comment.
pub fn parse_vqls_file(path: &Path) -> Result<VqlsFile> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading problem file {}", path.display()))?;
    let mut spec = VqlsFile::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = || format!("{}:{}", path.display(), lineno + 1);
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let parse = |value: &str| -> Result<usize> {
            value
                .parse()
                .with_context(|| format!("{}: bad value {:?}", at(), value))
        };
        match tokens.as_slice() {
            ["qubits", value] => {
                if spec.qubits.replace(parse(value)?).is_some() {
                    bail!("{}: qubits declared twice", at());
                }
            }
            ["layers", value] => {
                if spec.layers.replace(parse(value)?).is_some() {
                    bail!("{}: layers declared twice", at());
                }
            }
            _ => bail!("{}: expected `qubits <n>` or `layers <l>`", at()),
        }
    }
    if spec.qubits.is_none() && spec.layers.is_none() {
        bail!("{}: problem file declares nothing", path.display());
    }
    Ok(spec)
}
