//! Finite quivers and the paths in them.
//!
//! Paths are written left to right: `ab` means "first `a`, then `b`", so it is
//! composable exactly when the tail of `a` is the origin of `b`.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};

pub type VertexIdx = u32;
pub type ArrowIdx = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub origin: VertexIdx,
    pub tail: VertexIdx,
}

/// A finite directed multigraph. Declaration order of arrows seeds the term
/// order on paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, VertexIdx>,
    arrow_index: HashMap<String, ArrowIdx>,
}

impl Quiver {
    /// Builds a quiver from vertex names and `(name, origin, tail)` arrow
    /// triples given by vertex name.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Quiver> {
        let mut q = Quiver {
            vertices: Vec::new(),
            arrows: Vec::new(),
            vertex_index: HashMap::new(),
            arrow_index: HashMap::new(),
        };
        for v in vertices {
            q.add_vertex(v.as_ref())?;
        }
        for (name, o, t) in arrows {
            q.add_arrow(name.as_ref(), o.as_ref(), t.as_ref())?;
        }
        Ok(q)
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<VertexIdx> {
        if name.is_empty() {
            return Err(Error::InvalidQuiver("empty vertex name".into()));
        }
        if self.vertex_index.contains_key(name) {
            return Err(Error::InvalidQuiver(format!("duplicate vertex `{name}`")));
        }
        let idx = self.vertices.len() as VertexIdx;
        self.vertices.push(name.to_string());
        self.vertex_index.insert(name.to_string(), idx);
        Ok(idx)
    }

    pub fn add_arrow(&mut self, name: &str, origin: &str, tail: &str) -> Result<ArrowIdx> {
        if name.is_empty() {
            return Err(Error::InvalidQuiver("empty arrow name".into()));
        }
        if self.arrow_index.contains_key(name) {
            return Err(Error::InvalidQuiver(format!("duplicate arrow `{name}`")));
        }
        let o = self.vertex(origin)?;
        let t = self.vertex(tail)?;
        let idx = self.arrows.len() as ArrowIdx;
        self.arrows.push(Arrow { name: name.to_string(), origin: o, tail: t });
        self.arrow_index.insert(name.to_string(), idx);
        Ok(idx)
    }

    pub fn vertex(&self, name: &str) -> Result<VertexIdx> {
        self.vertex_index.get(name).copied().ok_or_else(|| Error::InvalidQuiver(format!("unknown vertex `{name}`")))
    }

    pub fn arrow(&self, name: &str) -> Result<ArrowIdx> {
        self.arrow_index.get(name).copied().ok_or_else(|| Error::InvalidQuiver(format!("unknown arrow `{name}`")))
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: VertexIdx) -> &str {
        &self.vertices[v as usize]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_info(&self, a: ArrowIdx) -> &Arrow {
        &self.arrows[a as usize]
    }

    /// The trivial path at a vertex.
    pub fn trivial(&self, v: VertexIdx) -> Path {
        Path::trivial(v)
    }

    /// The length-one path along an arrow.
    pub fn arrow_path(&self, a: ArrowIdx) -> Path {
        let info = &self.arrows[a as usize];
        Path { origin: info.origin, tail: info.tail, arrows: vec![a] }
    }

    /// Builds a path from arrow indices, checking composability.
    pub fn path(&self, arrows: &[ArrowIdx]) -> Result<Path> {
        let mut it = arrows.iter();
        let first = it.next().ok_or_else(|| Error::InvalidPath("empty arrow sequence".into()))?;
        let mut p = self.arrow_path(*first);
        for &a in it {
            let info = &self.arrows[a as usize];
            if info.origin != p.tail {
                return Err(Error::InvalidPath(format!(
                    "`{}` ends at `{}` but `{}` starts at `{}`",
                    self.path_to_string(&p),
                    self.vertex_name(p.tail),
                    info.name,
                    self.vertex_name(info.origin)
                )));
            }
            p.arrows.push(a);
            p.tail = info.tail;
        }
        Ok(p)
    }

    /// Parses `a*b*c` (arrow names) or `e_<vertex>` for a trivial path.
    pub fn parse_path(&self, text: &str) -> Result<Path> {
        let t = text.trim();
        if let Some(v) = t.strip_prefix("e_") {
            if let Ok(idx) = self.vertex(v) {
                return Ok(Path::trivial(idx));
            }
        }
        let ids = t.split('*').map(|s| self.arrow(s.trim())).collect::<Result<Vec<_>>>()?;
        self.path(&ids)
    }

    pub fn path_to_string(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            format!("e_{}", self.vertex_name(p.origin))
        } else {
            p.arrows.iter().map(|&a| self.arrows[a as usize].name.as_str()).collect::<Vec<_>>().join("*")
        }
    }

    /// The quiver with every arrow reversed; arrow `x` becomes `x°`-named
    /// `x` + `suffix`.
    pub fn opposite(&self, suffix: &str) -> Quiver {
        let arrows: Vec<(String, String, String)> = self
            .arrows
            .iter()
            .map(|a| {
                (
                    format!("{}{}", a.name, suffix),
                    self.vertices[a.tail as usize].clone(),
                    self.vertices[a.origin as usize].clone(),
                )
            })
            .collect();
        Quiver::new(&self.vertices, &arrows).expect("opposite of a valid quiver is valid")
    }
}

/// A path in a quiver: either the trivial path `e_v` or a nonempty sequence of
/// composable arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    origin: VertexIdx,
    tail: VertexIdx,
    arrows: Vec<ArrowIdx>,
}

impl Path {
    pub fn trivial(v: VertexIdx) -> Path {
        Path { origin: v, tail: v, arrows: Vec::new() }
    }

    pub fn origin(&self) -> VertexIdx {
        self.origin
    }

    pub fn tail(&self) -> VertexIdx {
        self.tail
    }

    pub fn arrows(&self) -> &[ArrowIdx] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    /// Same as [`Path::is_trivial`].
    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `pq`, or `None` when `tail(p) != origin(q)`.
    pub fn compose(&self, q: &Path) -> Option<Path> {
        if self.tail != q.origin {
            return None;
        }
        let mut arrows = Vec::with_capacity(self.arrows.len() + q.arrows.len());
        arrows.extend_from_slice(&self.arrows);
        arrows.extend_from_slice(&q.arrows);
        Some(Path { origin: self.origin, tail: q.tail, arrows })
    }

    /// The subpath of arrows `start..end`; trivial subpaths are located at the
    /// vertex between the neighbouring arrows.
    pub fn subpath(&self, quiver: &Quiver, start: usize, end: usize) -> Path {
        debug_assert!(start <= end && end <= self.arrows.len());
        if start == end {
            let v = if start == 0 { self.origin } else { quiver.arrow_info(self.arrows[start - 1]).tail };
            return Path::trivial(v);
        }
        let origin = quiver.arrow_info(self.arrows[start]).origin;
        let tail = quiver.arrow_info(self.arrows[end - 1]).tail;
        Path { origin, tail, arrows: self.arrows[start..end].to_vec() }
    }

    /// Arrow multiplicities, indexed by arrow.
    pub fn content(&self, num_arrows: usize) -> Vec<i32> {
        let mut c = vec![0; num_arrows];
        for &a in &self.arrows {
            c[a as usize] += 1;
        }
        c
    }

    /// True when `other` occurs as a contiguous subpath.
    pub fn contains(&self, other: &Path) -> bool {
        if other.is_trivial() {
            return false;
        }
        self.find(other).is_some()
    }

    /// Position of the first occurrence of `other`'s arrow word.
    pub fn find(&self, other: &Path) -> Option<usize> {
        let n = other.arrows.len();
        if n == 0 || n > self.arrows.len() {
            return None;
        }
        (0..=self.arrows.len() - n).find(|&i| self.arrows[i..i + n] == other.arrows[..])
    }

    pub(crate) fn from_parts(origin: VertexIdx, tail: VertexIdx, arrows: Vec<ArrowIdx>) -> Path {
        Path { origin, tail, arrows }
    }
}

/// Length first, then lexicographic in arrow declaration order. Trivial paths
/// are ordered by vertex.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.origin.cmp(&other.origin))
            .then_with(|| self.tail.cmp(&other.tail))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All paths of length exactly `n`, in term order.
pub fn enumerate_paths(quiver: &Quiver, n: usize) -> Vec<Path> {
    let mut layer: Vec<Path> = (0..quiver.num_vertices() as VertexIdx).map(Path::trivial).collect();
    if n == 0 {
        return layer;
    }
    layer = (0..quiver.num_arrows() as ArrowIdx).map(|a| quiver.arrow_path(a)).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for p in &layer {
            for (a, info) in quiver.arrows().iter().enumerate() {
                if info.origin == p.tail {
                    let mut arrows = p.arrows.clone();
                    arrows.push(a as ArrowIdx);
                    next.push(Path { origin: p.origin, tail: info.tail, arrows });
                }
            }
        }
        layer = next;
    }
    layer.sort();
    layer
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xu() -> Quiver {
        Quiver::new(&["1", "2"], &[("a", "1", "1"), ("b", "1", "1"), ("c", "1", "2")]).unwrap()
    }

    #[test]
    fn compose_loops_and_identities() {
        let q = xu();
        let a = q.arrow_path(0);
        let b = q.arrow_path(1);
        let c = q.arrow_path(2);
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.len(), 2);
        assert_eq!(q.path_to_string(&ab), "a*b");
        assert_eq!(Path::trivial(0).compose(&a).unwrap(), a);
        assert_eq!(c.compose(&a), None);
    }

    #[test]
    fn enumerate_small_lengths() {
        let q = xu();
        assert_eq!(enumerate_paths(&q, 0).len(), 2);
        let names: Vec<_> = enumerate_paths(&q, 1).iter().map(|p| q.path_to_string(p)).collect();
        assert_eq!(names, ["a", "b", "c"]);
        let names: Vec<_> = enumerate_paths(&q, 2).iter().map(|p| q.path_to_string(p)).collect();
        assert_eq!(names, ["a*a", "a*b", "a*c", "b*a", "b*b", "b*c"]);
    }

    #[test]
    fn invalid_quivers_rejected() {
        assert!(Quiver::new(&["1", "1"], &[]).is_err());
        assert!(Quiver::new(&["1"], &[("a", "1", "2")]).is_err());
        assert!(Quiver::new(&["1"], &[("a", "1", "1"), ("a", "1", "1")]).is_err());
    }

    #[test]
    fn parse_rejects_noncomposable() {
        let q = xu();
        assert!(q.parse_path("c*a").is_err());
        assert_eq!(q.parse_path("a*c").unwrap().len(), 2);
        assert!(q.parse_path("e_2").unwrap().is_trivial());
    }

    #[test]
    fn opposite_reverses() {
        let q = xu().opposite("°");
        let c = q.arrow("c°").unwrap();
        assert_eq!(q.arrow_info(c).origin, 1);
        assert_eq!(q.arrow_info(c).tail, 0);
    }
}
