//! Text file formats: datasets, split files, model and strength files,
//! prediction/ranking files, feature dumps, extra features and metrics.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;

use anchorradar_core::features::{ExtraColumns, PairFeatureMatrix, BASE_WIDTH};
use anchorradar_core::metrics::{EdgeMap, MetricsReport};
use anchorradar_core::stage1::Stage1Model;
use anchorradar_core::{Hypergraph, HypergraphBuilder, NodeId, SplitAssignment, SplitLabel};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] anchorradar_core::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn line_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Line {
        line,
        message: message.into(),
    }
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn content_lines<R: BufRead>(reader: R) -> impl Iterator<Item = io::Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l.trim_end_matches('\r').to_string())))
        .filter(|r| match r {
            Ok((_, l)) => !l.trim().is_empty() && !l.starts_with('#'),
            Err(_) => true,
        })
}

fn split_ids(field: &str) -> Vec<&str> {
    field.split(',').map(str::trim).collect()
}

/// Parses `members<TAB>anchors` lines; `#` lines and blank lines are
/// skipped. Node indices follow first appearance.
pub fn read_dataset<R: Read>(reader: R) -> Result<Hypergraph, FormatError> {
    let mut builder = HypergraphBuilder::new();
    for item in content_lines(BufReader::new(reader)) {
        let (line, text) = item?;
        let (members, anchors) = text
            .split_once('\t')
            .ok_or_else(|| line_err(line, "missing tab between members and anchors"))?;
        let members = split_ids(members);
        let anchors = split_ids(anchors);
        if members.iter().any(|m| m.is_empty()) {
            return Err(line_err(line, "empty member list or empty member id"));
        }
        if anchors.iter().any(|a| a.is_empty()) {
            return Err(line_err(line, "empty anchor list or empty anchor id"));
        }
        for (i, m) in members.iter().enumerate() {
            if members[..i].contains(m) {
                return Err(line_err(line, format!("node {m} appears twice")));
            }
        }
        for (i, a) in anchors.iter().enumerate() {
            if !members.contains(a) {
                return Err(line_err(line, format!("anchor {a} is not a member")));
            }
            if anchors[..i].contains(a) {
                return Err(line_err(line, format!("anchor {a} listed twice")));
            }
        }
        builder
            .add_named_edge(&members, &anchors)
            .map_err(|e| line_err(line, e.to_string()))?;
    }
    Ok(builder.build())
}

pub fn load_dataset(path: &Path) -> Result<Hypergraph, FormatError> {
    read_dataset(fs::File::open(path)?)
}

fn join_names(h: &Hypergraph, ids: &[NodeId]) -> String {
    let names: Vec<&str> = ids.iter().map(|&v| h.node_name(v)).collect();
    names.join(",")
}

/// Inverse of [`read_dataset`]: members in index order, then anchors.
pub fn write_dataset<W: Write>(h: &Hypergraph, mut w: W) -> io::Result<()> {
    for e in 0..h.edge_count() {
        writeln!(
            w,
            "{}\t{}",
            join_names(h, h.edge(e)),
            join_names(h, h.anchors(e))
        )?;
    }
    Ok(())
}

/// One line per unique hyperedge: canonical key and label.
pub fn write_split<W: Write>(h: &Hypergraph, s: &SplitAssignment, mut w: W) -> io::Result<()> {
    for key in 0..h.unique_count() {
        writeln!(w, "{}\t{}", h.canonical_key(key), s.label_of_key(key))?;
    }
    Ok(())
}

pub fn read_split<R: Read>(h: &Hypergraph, reader: R) -> Result<SplitAssignment, FormatError> {
    let mut labels: Vec<Option<SplitLabel>> = vec![None; h.unique_count()];
    for item in content_lines(BufReader::new(reader)) {
        let (line, text) = item?;
        let (key, label) = text
            .split_once('\t')
            .ok_or_else(|| line_err(line, "missing tab between key and label"))?;
        let label: SplitLabel = label
            .trim()
            .parse()
            .map_err(|_| line_err(line, format!("unknown split label {label:?}")))?;
        let mut members = key
            .split(',')
            .map(|t| t.trim().parse::<NodeId>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| line_err(line, format!("bad node-set key {key:?}")))?;
        members.sort_unstable();
        let unique = h.find_unique(&members).ok_or_else(|| {
            line_err(line, format!("key {key} is not a hyperedge of the dataset"))
        })?;
        if labels[unique].replace(label).is_some() {
            return Err(line_err(line, format!("key {key} listed twice")));
        }
    }
    if let Some(missing) = labels.iter().position(Option::is_none) {
        return Err(FormatError::Invalid(format!(
            "split file has no label for hyperedge key {}",
            h.canonical_key(missing)
        )));
    }
    Ok(SplitAssignment::from_labels(
        h,
        labels.into_iter().map(Option::unwrap).collect(),
    )?)
}

/// `n_f D_h`, then one line per W1 row, then b1, W2 and b2.
pub fn write_model<W: Write>(m: &Stage1Model, mut w: W) -> io::Result<()> {
    writeln!(w, "{} {}", m.n_features(), m.hidden())?;
    let line = |xs: &[f64]| xs.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(" ");
    for row in m.w1().chunks(m.hidden()) {
        writeln!(w, "{}", line(row))?;
    }
    writeln!(w, "{}", line(m.b1()))?;
    writeln!(w, "{}", line(m.w2()))?;
    writeln!(w, "{}", fmt_f64(m.b2()))?;
    Ok(())
}

pub fn read_model<R: Read>(mut reader: R) -> Result<Stage1Model, FormatError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let mut tokens = text.split_whitespace();
    let mut dim = |what: &str| -> Result<usize, FormatError> {
        tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| FormatError::Invalid(format!("model file: bad {what}")))
    };
    let n_f = dim("input width")?;
    let d_h = dim("hidden width")?;
    let params = text
        .split_whitespace()
        .skip(2)
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| FormatError::Invalid(format!("model file: bad number {t:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Stage1Model::from_params(n_f, d_h, params)?)
}

/// `<node_id>\t<s2>\t<p̂>` per node.
pub fn write_strengths<W: Write>(
    h: &Hypergraph,
    strengths: &[f64],
    proportions: &[f64],
    mut w: W,
) -> io::Result<()> {
    for v in 0..h.node_count() {
        writeln!(
            w,
            "{}\t{}\t{}",
            h.node_name(v as NodeId),
            fmt_f64(strengths[v]),
            fmt_f64(proportions[v])
        )?;
    }
    Ok(())
}

/// Strengths and proportions in node order.
pub fn read_strengths<R: Read>(
    h: &Hypergraph,
    reader: R,
) -> Result<(Vec<f64>, Vec<f64>), FormatError> {
    let mut s = vec![f64::NAN; h.node_count()];
    let mut p = vec![f64::NAN; h.node_count()];
    for item in content_lines(BufReader::new(reader)) {
        let (line, text) = item?;
        let fields: Vec<&str> = text.split('\t').collect();
        if fields.len() != 3 {
            return Err(line_err(line, "expected node, strength and proportion"));
        }
        let v = h
            .node_by_name(fields[0])
            .ok_or_else(|| line_err(line, format!("unknown node {}", fields[0])))?;
        let parse = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| line_err(line, format!("bad number {t:?}")))
        };
        s[v as usize] = parse(fields[1])?;
        p[v as usize] = parse(fields[2])?;
    }
    if let Some(v) = s.iter().position(|x| x.is_nan()) {
        return Err(FormatError::Invalid(format!(
            "strength file has no entry for node {}",
            h.node_name(v as NodeId)
        )));
    }
    Ok((s, p))
}

/// `<edge_idx>\t<id[,id…]>` per entry; used for predictions and rankings.
pub fn write_edge_map<W: Write>(h: &Hypergraph, map: &EdgeMap, mut w: W) -> io::Result<()> {
    for (e, ids) in map {
        writeln!(w, "{e}\t{}", join_names(h, ids))?;
    }
    Ok(())
}

pub fn read_edge_map<R: Read>(h: &Hypergraph, reader: R) -> Result<EdgeMap, FormatError> {
    let mut map = BTreeMap::new();
    for item in content_lines(BufReader::new(reader)) {
        let (line, text) = item?;
        let (idx, ids) = text
            .split_once('\t')
            .ok_or_else(|| line_err(line, "missing tab after edge index"))?;
        let e: usize = idx
            .trim()
            .parse()
            .map_err(|_| line_err(line, format!("bad edge index {idx:?}")))?;
        if e >= h.edge_count() {
            return Err(line_err(line, format!("edge index {e} out of range")));
        }
        let nodes = split_ids(ids)
            .into_iter()
            .map(|name| {
                h.node_by_name(name)
                    .ok_or_else(|| line_err(line, format!("unknown node {name}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        map.insert(e, nodes);
    }
    Ok(map)
}

/// Feature matrix as TSV with a header row.
pub fn write_features<W: Write>(h: &Hypergraph, x: &PairFeatureMatrix, mut w: W) -> io::Result<()> {
    let mut header = String::from("edge_idx\tnode_id");
    for i in 0..x.n_cols() {
        if i < BASE_WIDTH {
            write!(header, "\tf{i}").unwrap();
        } else {
            write!(header, "\tx{}", i - BASE_WIDTH).unwrap();
        }
    }
    writeln!(w, "{header}")?;
    for e in 0..h.edge_count() {
        for (r, &v) in x.edge_rows(e).zip(h.edge(e)) {
            let values: Vec<String> = x.row(r).iter().map(|&f| fmt_f64(f)).collect();
            writeln!(w, "{e}\t{}\t{}", h.node_name(v), values.join("\t"))?;
        }
    }
    Ok(())
}

/// `<node_id>\t<v1>\t<v2>…`; lines for nodes outside the dataset are
/// ignored, and every dataset node must be covered.
pub fn read_extra<R: Read>(h: &Hypergraph, reader: R) -> Result<ExtraColumns, FormatError> {
    let mut extra: Option<ExtraColumns> = None;
    let mut seen = vec![false; h.node_count()];
    for item in content_lines(BufReader::new(reader)) {
        let (line, text) = item?;
        let mut fields = text.split('\t');
        let name = fields.next().unwrap_or_default();
        let values = fields
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| line_err(line, format!("bad number {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let cols = extra.get_or_insert_with(|| ExtraColumns::new(h.node_count(), values.len()));
        if values.len() != cols.width() {
            return Err(line_err(
                line,
                format!("expected {} values, found {}", cols.width(), values.len()),
            ));
        }
        if let Some(v) = h.node_by_name(name) {
            cols.set(v, &values)?;
            seen[v as usize] = true;
        }
    }
    let extra = extra.ok_or_else(|| FormatError::Invalid("extra-feature file is empty".into()))?;
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(FormatError::Invalid(format!(
            "extra features missing for node {}",
            h.node_name(v as NodeId)
        )));
    }
    Ok(extra)
}

/// `key\tvalue` metric lines.
pub fn write_metrics<W: Write>(
    subset: &str,
    seed: u64,
    m: &MetricsReport,
    mut w: W,
) -> io::Result<()> {
    writeln!(w, "subset\t{subset}")?;
    writeln!(w, "seed\t{seed}")?;
    writeln!(w, "edges\t{}", m.edges)?;
    writeln!(w, "accuracy\t{}", fmt_f64(m.accuracy))?;
    writeln!(w, "ndcg\t{}", fmt_f64(m.ndcg))?;
    writeln!(w, "mrr\t{}", fmt_f64(m.mrr))?;
    Ok(())
}

/// Reads `key\tvalue` lines into a map.
pub fn read_key_values<R: Read>(reader: R) -> Result<BTreeMap<String, String>, FormatError> {
    let mut out = BTreeMap::new();
    for item in content_lines(BufReader::new(reader)) {
        let (line, text) = item?;
        let (k, v) = text
            .split_once('\t')
            .ok_or_else(|| line_err(line, "missing tab"))?;
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}
