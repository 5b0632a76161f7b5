use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use super::minset::MinsetRegion;
use super::tile::TileGrid;
use crate::error::{Error, Result};
use crate::lattice::{Family, Generator, Lattice};
use crate::quat::Quat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
    Dot,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "ascii" | "text" => Ok(Format::Ascii),
            "svg" => Ok(Format::Svg),
            "dot" => Ok(Format::Dot),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub name: String,
    pub pos: Option<(i64, i64)>,
    pub origin: bool,
}

/// An arrow `from → to` drawn along the non-inverted direction of its letter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: String,
}

/// Labeled vertices and arrows, optionally placed on the integer grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

fn arrow(from: usize, to: usize, g: Generator) -> Edge {
    if g.inverted {
        Edge {
            from: to,
            to: from,
            label: g.base_name(),
        }
    } else {
        Edge {
            from,
            to,
            label: g.base_name(),
        }
    }
}

impl Diagram {
    pub fn from_grid(grid: &TileGrid) -> Diagram {
        let (w, h) = (grid.width, grid.height);
        let id = |i: usize, j: usize| i * (h + 1) + j;
        let mut nodes = Vec::new();
        for i in 0..=w {
            for j in 0..=h {
                nodes.push(Node {
                    name: format!("{i},{j}"),
                    pos: Some((i as i64, j as i64)),
                    origin: i == 0 && j == 0,
                });
            }
        }
        let mut edges = Vec::new();
        for i in 0..w {
            for j in 0..=h {
                edges.push(arrow(id(i, j), id(i + 1, j), grid.h[i][j]));
            }
        }
        for i in 0..=w {
            for j in 0..h {
                edges.push(arrow(id(i, j), id(i, j + 1), grid.v[i][j]));
            }
        }
        edges.sort();
        Diagram { nodes, edges }
    }

    /// Nodes are the region's vertices named by their shortest words. When
    /// both tree projections of the region are paths the nodes are also
    /// placed in the plane; otherwise only DOT output is possible.
    pub fn from_region(lattice: &Lattice, region: &MinsetRegion) -> Result<Diagram> {
        let index: HashMap<&Quat, usize> = region
            .vertices
            .iter()
            .enumerate()
            .map(|(i, (_, v))| (v.rep(), i))
            .collect();
        let origin = region
            .vertices
            .iter()
            .position(|(_, v)| v.is_identity())
            .unwrap_or(0);
        let mut edges = Vec::new();
        // (vertex, letter, neighbour) for every non-inverted letter
        let mut steps = Vec::new();
        for (i, (_, v)) in region.vertices.iter().enumerate() {
            for g in lattice.all_letters() {
                let w = v.multiply(&lattice.generator(g)?)?;
                if let Some(&j) = index.get(w.rep()) {
                    steps.push((i, g, j));
                    if !g.inverted {
                        edges.push(Edge {
                            from: i,
                            to: j,
                            label: g.base_name(),
                        });
                    }
                }
            }
        }
        edges.sort();
        let xs = path_positions(
            region.columns()?,
            &steps,
            Family::A,
            origin,
            region.vertices.len(),
        );
        let ys = path_positions(
            region.rows()?,
            &steps,
            Family::B,
            origin,
            region.vertices.len(),
        );
        let nodes = region
            .vertices
            .iter()
            .enumerate()
            .map(|(i, (w, _))| Node {
                name: if w.is_empty() {
                    "O".to_string()
                } else {
                    w.to_string()
                },
                pos: xs.as_ref().zip(ys.as_ref()).map(|(x, y)| (x[i], y[i])),
                origin: i == origin,
            })
            .collect();
        Ok(Diagram { nodes, edges })
    }

    pub fn is_placed(&self) -> bool {
        self.nodes.iter().all(|n| n.pos.is_some())
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Dot => Ok(self.dot()),
            Format::Ascii => self.ascii(),
            Format::Svg => self.svg(),
        }
    }

    fn placed(&self) -> Result<Vec<(i64, i64)>> {
        self.nodes
            .iter()
            .map(|n| n.pos)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| {
                Error::UnsupportedFormat("region is not a product of two paths; use dot".into())
            })
    }

    fn bounds(pos: &[(i64, i64)]) -> (i64, i64, i64, i64) {
        let xmin = pos.iter().map(|p| p.0).min().unwrap_or(0);
        let xmax = pos.iter().map(|p| p.0).max().unwrap_or(0);
        let ymin = pos.iter().map(|p| p.1).min().unwrap_or(0);
        let ymax = pos.iter().map(|p| p.1).max().unwrap_or(0);
        (xmin, xmax, ymin, ymax)
    }

    fn ascii(&self) -> Result<String> {
        let pos = self.placed()?;
        let (xmin, xmax, ymin, ymax) = Self::bounds(&pos);
        let cols = 6 * (xmax - xmin) as usize + 8;
        let rows = 3 * (ymax - ymin) as usize + 1;
        let mut canvas = vec![vec![' '; cols]; rows];
        let at = |p: (i64, i64)| (3 * (ymax - p.1) as usize, 6 * (p.0 - xmin) as usize);
        let mut put = |r: usize, c: usize, s: &str| {
            for (k, ch) in s.chars().enumerate() {
                if c + k < cols {
                    canvas[r][c + k] = ch;
                }
            }
        };
        for e in &self.edges {
            let (a, b) = (pos[e.from], pos[e.to]);
            let dashed = format!("-{}", e.label);
            if a.1 == b.1 {
                let left = a.0.min(b.0);
                let (r, c) = at((left, a.1));
                let body = if a.0 < b.0 {
                    format!("{dashed:-<4}>")
                } else {
                    format!("<{dashed:-<4}")
                };
                put(r, c + 1, &body);
            } else {
                let low = if a.1 < b.1 { a } else { b };
                let (r, c) = at(low);
                let (top, bottom) = if a.1 < b.1 { ("^", "|") } else { ("|", "v") };
                put(r - 2, c, &format!("{top} {}", e.label));
                put(r - 1, c, bottom);
            }
        }
        for (n, &p) in self.nodes.iter().zip(&pos) {
            let (r, c) = at(p);
            put(r, c, if n.origin { "O" } else { "+" });
        }
        let mut out = String::new();
        for line in canvas {
            let s: String = line.into_iter().collect();
            out += s.trim_end();
            out.push('\n');
        }
        Ok(out)
    }

    fn svg(&self) -> Result<String> {
        const CELL: i64 = 40;
        const MARGIN: i64 = 40;
        let pos = self.placed()?;
        let (xmin, xmax, ymin, ymax) = Self::bounds(&pos);
        let width = CELL * (xmax - xmin) + 2 * MARGIN;
        let height = CELL * (ymax - ymin) + 2 * MARGIN;
        let px = |p: (i64, i64)| (MARGIN + CELL * (p.0 - xmin), MARGIN + CELL * (ymax - p.1));
        let origin = self.nodes.iter().position(|n| n.origin).map(|i| px(pos[i]));
        let mut s = String::new();
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
        )
        .unwrap();
        if let Some((ox, oy)) = origin {
            let half = CELL / 2;
            s += "  <g class=\"axes\" stroke=\"#bbbbbb\" stroke-dasharray=\"2,3\">\n";
            writeln!(
                s,
                r#"    <line x1="{}" y1="{oy}" x2="{}" y2="{oy}"/>"#,
                MARGIN - half,
                width - MARGIN + half
            )
            .unwrap();
            writeln!(
                s,
                r#"    <line x1="{ox}" y1="{}" x2="{ox}" y2="{}"/>"#,
                height - MARGIN + half,
                MARGIN - half
            )
            .unwrap();
            s += "  </g>\n";
        }
        s += "  <g class=\"edges\" stroke=\"black\" stroke-width=\"1.5\">\n";
        for e in &self.edges {
            let ((x1, y1), (x2, y2)) = (px(pos[e.from]), px(pos[e.to]));
            writeln!(s, r#"    <line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#).unwrap();
        }
        s += "  </g>\n";
        s += "  <g class=\"arrows\" fill=\"black\">\n";
        for e in &self.edges {
            let ((x1, y1), (x2, y2)) = (px(pos[e.from]), px(pos[e.to]));
            let (dx, dy) = ((x2 - x1).signum(), (y2 - y1).signum());
            let (mx, my) = ((x1 + x2) / 2, (y1 + y2) / 2);
            let tip = (mx + 5 * dx, my + 5 * dy);
            let b1 = (mx - 4 * dx - 4 * dy, my - 4 * dy + 4 * dx);
            let b2 = (mx - 4 * dx + 4 * dy, my - 4 * dy - 4 * dx);
            writeln!(
                s,
                r#"    <polygon points="{},{} {},{} {},{}"/>"#,
                tip.0, tip.1, b1.0, b1.1, b2.0, b2.1
            )
            .unwrap();
        }
        s += "  </g>\n";
        s += "  <g class=\"labels\" font-family=\"serif\" font-size=\"11\">\n";
        for e in &self.edges {
            let ((x1, y1), (x2, y2)) = (px(pos[e.from]), px(pos[e.to]));
            let (mx, my) = ((x1 + x2) / 2, (y1 + y2) / 2);
            if y1 == y2 {
                writeln!(
                    s,
                    r#"    <text x="{mx}" y="{}" text-anchor="middle">{}</text>"#,
                    my - 7,
                    e.label
                )
                .unwrap();
            } else {
                writeln!(
                    s,
                    r#"    <text x="{}" y="{}">{}</text>"#,
                    mx + 7,
                    my + 4,
                    e.label
                )
                .unwrap();
            }
        }
        s += "  </g>\n";
        s += "  <g class=\"vertices\" fill=\"black\">\n";
        for &p in &pos {
            let (x, y) = px(p);
            writeln!(s, r#"    <circle cx="{x}" cy="{y}" r="2.5"/>"#).unwrap();
        }
        s += "  </g>\n";
        if let Some((ox, oy)) = origin {
            writeln!(
                s,
                r#"  <text x="{}" y="{}" font-family="serif" font-size="13" font-style="italic">O</text>"#,
                ox - 14,
                oy + 16
            )
            .unwrap();
        }
        s += "</svg>\n";
        Ok(s)
    }

    fn dot(&self) -> String {
        let mut s = String::from("digraph complex {\n  node [shape=point];\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let mut attrs = vec![format!("xlabel=\"{}\"", n.name)];
            if let Some((x, y)) = n.pos {
                attrs.push(format!("pos=\"{x},{y}!\""));
            }
            if n.origin {
                attrs.push("shape=circle".into());
            }
            writeln!(s, "  v{i} [{}];", attrs.join(", ")).unwrap();
        }
        for e in &self.edges {
            writeln!(s, "  v{} -> v{} [label=\"{}\"];", e.from, e.to, e.label).unwrap();
        }
        s += "}\n";
        s
    }
}

/// Integer coordinates along one tree projection, or None if the projection
/// is not a path. The origin's class sits at 0; the class reached from the
/// origin by the smallest non-inverted letter of `family` goes to +1.
fn path_positions(
    classes: Vec<Vec<usize>>,
    steps: &[(usize, Generator, usize)],
    family: Family,
    origin: usize,
    n: usize,
) -> Option<Vec<i64>> {
    let mut class_of = vec![0usize; n];
    for (c, members) in classes.iter().enumerate() {
        for &v in members {
            class_of[v] = c;
        }
    }
    let k = classes.len();
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(i, g, j) in steps {
        if g.family != family {
            continue;
        }
        let (a, b) = (class_of[i], class_of[j]);
        let list = adj.entry(a).or_default();
        if !list.contains(&b) {
            list.push(b);
        }
    }
    if adj.values().any(|v| v.len() > 2) {
        return None;
    }
    let start = (0..k).find(|c| adj.get(c).map_or(0, Vec::len) <= 1)?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = adj.get(&cur).and_then(|v| v.iter().find(|&&x| x != prev)) {
        prev = cur;
        cur = next;
        order.push(cur);
        if order.len() > k {
            return None;
        }
    }
    if order.len() != k {
        return None;
    }
    let mut at = vec![0i64; k];
    for (idx, &c) in order.iter().enumerate() {
        at[c] = idx as i64;
    }
    let o = at[class_of[origin]];
    let mut letters: Vec<(Generator, usize)> = steps
        .iter()
        .filter(|&&(i, g, _)| i == origin && g.family == family)
        .map(|&(_, g, j)| (g, j))
        .collect();
    letters.sort();
    let flip = if let Some(&(_, j)) = letters.iter().find(|(g, _)| !g.inverted) {
        at[class_of[j]] < o
    } else if let Some(&(_, j)) = letters.first() {
        at[class_of[j]] > o
    } else {
        false
    };
    let sign = if flip { -1 } else { 1 };
    Some((0..n).map(|v| sign * (at[class_of[v]] - o)).collect())
}
