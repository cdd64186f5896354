//! Writers for graphs, samples and detected structures.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::detect::{Detection, StructureFlag, StructureKind};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    EdgeList,
    Dot,
    GraphMl,
    /// Structure records only.
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "edges" | "edgelist" | "edge-list" | "txt" => Ok(ExportFormat::EdgeList),
            "dot" => Ok(ExportFormat::Dot),
            "graphml" => Ok(ExportFormat::GraphMl),
            "json" => Ok(ExportFormat::Json),
            _ => Err(Error::Config(format!("unknown export format `{s}`"))),
        }
    }
}

/// One detected structure with labels in place of ids.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureRecord {
    pub kind: StructureKind,
    pub key_nodes: Vec<String>,
    pub attached_nodes: Vec<String>,
    pub importance: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<StructureFlag>,
}

pub fn structure_records(g: &Graph, detection: &Detection) -> Vec<StructureRecord> {
    let labels = |ids: &[NodeId]| ids.iter().map(|&v| g.label(v).to_owned()).collect();
    detection
        .iter()
        .map(|s| StructureRecord {
            kind: s.kind,
            key_nodes: labels(&s.key_nodes),
            attached_nodes: labels(&s.attached_nodes),
            importance: s.importance,
            flags: s.flags.clone(),
        })
        .collect()
}

pub fn write_structures_json<W: Write>(g: &Graph, detection: &Detection, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, &structure_records(g, detection))?;
    Ok(())
}

/// Per-node structure roles used as node attributes.
struct Overlay {
    key: Vec<BTreeSet<StructureKind>>,
    attached: Vec<BTreeSet<StructureKind>>,
}

impl Overlay {
    fn new(g: &Graph, detection: Option<&Detection>) -> Self {
        let mut o = Overlay {
            key: vec![BTreeSet::new(); g.node_count()],
            attached: vec![BTreeSet::new(); g.node_count()],
        };
        for s in detection.into_iter().flat_map(Detection::iter) {
            for &v in &s.key_nodes {
                o.key[v].insert(s.kind);
            }
            for &v in &s.attached_nodes {
                o.attached[v].insert(s.kind);
            }
        }
        o
    }

    fn join(kinds: &BTreeSet<StructureKind>) -> String {
        kinds.iter().map(|k| format!("{k:?}")).collect::<Vec<_>>().join(";")
    }
}

/// Nodes and edges of `sample` if given, else of the whole graph.
fn view(g: &Graph, sample: Option<&Sample>) -> (Vec<NodeId>, Vec<(NodeId, NodeId)>) {
    match sample {
        Some(s) => (s.nodes.clone(), s.edges.clone()),
        None => (g.nodes().collect(), g.edges().collect()),
    }
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn write_dot<W: Write>(g: &Graph, sample: Option<&Sample>, detection: Option<&Detection>, mut out: W) -> Result<()> {
    let overlay = Overlay::new(g, detection);
    let (nodes, edges) = view(g, sample);
    writeln!(out, "graph G {{")?;
    for v in nodes {
        write!(out, "  {}", dot_quote(g.label(v)))?;
        let mut attrs = Vec::new();
        if !overlay.key[v].is_empty() {
            attrs.push(format!("structure={}", dot_quote(&Overlay::join(&overlay.key[v]))));
        }
        if !overlay.attached[v].is_empty() {
            attrs.push(format!("attached={}", dot_quote(&Overlay::join(&overlay.attached[v]))));
        }
        if !attrs.is_empty() {
            write!(out, " [{}]", attrs.join(", "))?;
        }
        writeln!(out, ";")?;
    }
    for (u, v) in edges {
        writeln!(out, "  {} -- {};", dot_quote(g.label(u)), dot_quote(g.label(v)))?;
    }
    writeln!(out, "}}")?;
    Ok(())
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub fn write_graphml<W: Write>(g: &Graph, sample: Option<&Sample>, detection: Option<&Detection>, mut out: W) -> Result<()> {
    let overlay = Overlay::new(g, detection);
    let (nodes, edges) = view(g, sample);
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(out, r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns">"#)?;
    writeln!(out, r#"  <key id="structure" for="node" attr.name="structure" attr.type="string"/>"#)?;
    writeln!(out, r#"  <key id="attached" for="node" attr.name="attached" attr.type="string"/>"#)?;
    writeln!(out, r#"  <graph id="G" edgedefault="undirected">"#)?;
    for v in nodes {
        let id = xml_escape(g.label(v));
        if overlay.key[v].is_empty() && overlay.attached[v].is_empty() {
            writeln!(out, r#"    <node id="{id}"/>"#)?;
            continue;
        }
        writeln!(out, r#"    <node id="{id}">"#)?;
        if !overlay.key[v].is_empty() {
            writeln!(out, r#"      <data key="structure">{}</data>"#, Overlay::join(&overlay.key[v]))?;
        }
        if !overlay.attached[v].is_empty() {
            writeln!(out, r#"      <data key="attached">{}</data>"#, Overlay::join(&overlay.attached[v]))?;
        }
        writeln!(out, "    </node>")?;
    }
    for (u, v) in edges {
        writeln!(
            out,
            r#"    <edge source="{}" target="{}"/>"#,
            xml_escape(g.label(u)),
            xml_escape(g.label(v))
        )?;
    }
    writeln!(out, "  </graph>\n</graphml>")?;
    Ok(())
}

/// Writes `g` (or `sample`) in `format` to `out`.
pub fn export<W: Write>(
    g: &Graph,
    sample: Option<&Sample>,
    detection: Option<&Detection>,
    format: ExportFormat,
    mut out: W,
) -> Result<()> {
    match format {
        ExportFormat::EdgeList => match sample {
            Some(s) => s.write_edge_list(g, out)?,
            None => g.write_edge_list(&mut out)?,
        },
        ExportFormat::Dot => write_dot(g, sample, detection, out)?,
        ExportFormat::GraphMl => write_graphml(g, sample, detection, out)?,
        ExportFormat::Json => {
            let Some(d) = detection else {
                return Err(Error::Config("json export needs detected structures".into()));
            };
            write_structures_json(g, d, out)?
        }
    }
    Ok(())
}

pub fn export_to_path(
    g: &Graph,
    sample: Option<&Sample>,
    detection: Option<&Detection>,
    format: ExportFormat,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    export(g, sample, detection, format, &mut w)?;
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::detect;
    use crate::graph::fixtures::*;

    #[test]
    fn dot_marks_structures() {
        let g = parachute();
        let d = detect(&g);
        let mut buf = Vec::new();
        write_dot(&g, None, Some(&d), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("graph G {"));
        assert!(text.contains("ParachuteRim"));
        assert_eq!(text.matches(" -- ").count(), g.edge_count());
    }

    #[test]
    fn graphml_is_escaped() {
        let g = crate::graph::parse_edge_list_str("a&b c\n", Default::default()).unwrap();
        let mut buf = Vec::new();
        write_graphml(&g, None, None, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains(r#"<node id="a&amp;b"/>"#));
        assert!(!text.contains("a&b"));
    }

    #[test]
    fn json_records_use_labels() {
        let g = barbell();
        let d = detect(&g);
        let recs = structure_records(&g, &d);
        assert!(recs.iter().any(|r| r.kind == StructureKind::Tie && r.key_nodes.len() == 4));
        let mut buf = Vec::new();
        write_structures_json(&g, &d, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert!(v.as_array().unwrap().len() == d.len());
    }

    #[test]
    fn missing_directory_reports_path() {
        let g = barbell();
        let err = export_to_path(&g, None, None, ExportFormat::EdgeList, "/nonexistent/dir/x.txt").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/x.txt"));
    }
}
